#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "detstrata/determinantal.hpp"
#include "detstrata/formulas.hpp"
#include "detstrata/homext.hpp"

namespace detstrata {

// A checked fact. method is one of closed-form, linear-algebra, groebner,
// truncated; verified is false when the bounds did not decide the value.
template <typename T>
struct Fact {
  T value{};
  bool verified = false;
  std::string method;
  std::string note;
};

struct Hypotheses {
  int c = 0;
  int dim_A = 0;  // n + 1 - c
  bool artinian = false;
  Fact<bool> homAMM_is_k;
  Fact<std::size_t> ext1A_MM;
  std::optional<Fact<std::size_t>> ext2A_MM;
  Fact<bool> delta0_injective;
  Fact<bool> delta0_surjective;
  std::optional<Fact<std::size_t>> ext1A_conormal;
  Fact<std::size_t> hom_I_A;
  // dim E2 - rank delta0, an upper bound for 0hom(I,A) - λ
  Fact<std::size_t> ext2_MM_bound;
  // from the length of the Eagon-Northcott resolution
  Fact<int> depth_A;
  // 0Hom_R(I, H^1_m(A)) = 0
  Fact<bool> h1_condition;
};

struct CodimEstimate {
  std::int64_t lower = 0;
  std::int64_t upper = 0;
  bool exact = false;
  bool operator==(const CodimEstimate&) const = default;
};

struct Verdicts {
  std::optional<std::int64_t> dim_Ws;
  std::optional<CodimEstimate> codim_in_GradAlg;
  // Reported as 0hom(I,A) when a smoothness verdict holds.
  std::optional<std::int64_t> dim_GradAlg;
  std::optional<bool> generically_smooth;
  std::optional<bool> is_component;
  std::optional<bool> every_def_from_matrix;
  std::optional<bool> glicci_general_element;
};

// What one theorem contributes.
struct PartialVerdict {
  std::string theorem;
  Verdicts verdicts;
  std::vector<std::string> notes;
};

struct Refusal {
  std::string theorem;
  std::string reason;
  bool undecided = false;
};

struct Provenance {
  std::vector<std::string> fired;
  std::vector<Refusal> refused;
  std::vector<std::string> notes;
};

struct ScanEntry {
  std::string clause;
  bool fires = false;
  std::string detail;
};

// Combinatorial sufficient conditions; no Ext computation involved.
struct SufficientConditionScan {
  int dim_A = 0;
  // a_{i-min(α,t)} >= b_i for min(α,t) <= i <= t
  bool gap2 = false;
  bool gap3 = false;
  // Lower bounds min{2α-1, j+2} for codim Sing(X_j), j = 2..c, using the
  // largest α in {2, 3} whose gap holds.
  std::optional<int> alpha;
  std::vector<int> singular_codim_bounds;
  std::vector<ScanEntry> entries;

  bool fires(const std::string& clause) const;
};

SufficientConditionScan sufficient_condition_scan(const DegreeMatrixSpec& spec);
// a_{i-min(α,t)} - b_i >= 0 for min(α,t) <= i <= t (i 1-based)
bool degree_gap(const DegreeMatrixSpec& spec, int alpha);

// Theorem gates. Each throws HypothesisNotVerified, flagged undecided when a
// needed fact was not decided within bounds.
PartialVerdict module_deformation_equivalence(const Hypotheses& h, const StratumInvariants& inv);
PartialVerdict codimension_bound(const Hypotheses& h, const StratumInvariants& inv);
PartialVerdict smooth_component(const Hypotheses& h, const StratumInvariants& inv);
PartialVerdict smooth_morphism_component(const Hypotheses& h, const StratumInvariants& inv);
// c = 2 only; dim = λ(R̄)_2 over a quotient R̄ with the given Hilbert function,
// the polynomial ring when absent.
PartialVerdict codim_two_quotient(const Hypotheses& h, const DegreeMatrixSpec& spec);
PartialVerdict glicci_general_element(const Hypotheses& h, const StratumInvariants& inv);

struct StratumReport {
  static constexpr int kSchemaVersion = 1;
  DegreeMatrixSpec spec;
  StratumInvariants invariants;
  CodimensionReport codim;
  std::vector<std::uint64_t> seeds_tried;
  Hypotheses hypotheses;
  std::size_t ext1_R = 0;  // 0ext^1_R(M,M) by degree-wise ranks
  Verdicts verdicts;
  Provenance provenance;
  SufficientConditionScan scan;
  // Internal inconsistencies between routes or theorems; empty when sound.
  std::vector<std::string> findings;
  bool undecided = false;
};

struct VerifyOptions {
  HomExtOptions homext;
  int max_tries = 8;
  // Restrict to these theorem names; all when empty.
  std::vector<std::string> theorems;
};

// Names accepted in VerifyOptions::theorems.
const std::vector<std::string>& theorem_names();

// Samples, checks codimension and runs the Hom/Ext battery. Throws
// EmptyStratum and NotStandard.
Hypotheses collect_hypotheses(HomExtContext& ctx, const CodimensionReport& codim);
// Applies the requested theorems and merges their verdicts.
void apply_verdicts(StratumReport& report, const std::vector<std::string>& theorems = {});
StratumReport verify(const DegreeMatrixSpec& spec, const VerifyOptions& options = {});

std::string to_json(const StratumReport& report, int indent = 2);
std::string to_text(const StratumReport& report);

}  // namespace detstrata
