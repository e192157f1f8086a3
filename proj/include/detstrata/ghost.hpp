#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "detstrata/determinantal.hpp"

namespace detstrata {

// R(-j) in homological degrees i and i+1 of a minimal resolution.
struct GhostEntry {
  int i = 0;
  int j = 0;
  std::size_t count = 0;      // min(β_{i,j}, β_{i+1,j})
  std::size_t removable = 0;  // part attributable to a corner a_j = b_i
  bool operator==(const GhostEntry&) const = default;
};

struct GhostLedger {
  BettiTable table;
  std::vector<GhostEntry> entries;

  std::size_t total() const;
  std::size_t persistent() const;  // count - removable, summed
  // Overlap counts recomputed from the table match the stored ones.
  bool consistent() const;
};

GhostLedger detect_ghosts(const BettiTable& table);

// Corner positions (i 1-based row, j 0-based column) with a_j = b_i,
// j in {0, t+c-2} and i in {1, t}.
std::vector<std::pair<std::size_t, std::size_t>> corner_overlaps(const DegreeMatrixSpec& spec);

// Drops row i (1-based) and column j (0-based). Throws NotACornerOverlap.
DegreeMatrixSpec reduce_degree_matrix(const DegreeMatrixSpec& spec, std::size_t i, std::size_t j);

// EN(b;a) - EN(b_î;a_ĵ) for one corner, a union of consecutive pairs.
BettiTable attributable_ghosts(const DegreeMatrixSpec& spec, std::size_t i, std::size_t j);

// Marks ghosts of the ledger that some single corner reduction removes.
void classify_ghosts(GhostLedger& ledger, const DegreeMatrixSpec& spec);

// Minimal Betti table of R/I_t(m), R in position 0.
BettiTable quotient_betti(const GradedMatrix& m);

// t-minors of the matrix equal (t-1)-minors of a' inside (1 0; 0 a').
GradedMatrix bordered_matrix(const DegreeMatrixSpec& spec, std::size_t i, std::size_t j, const GradedMatrix& reduced);

struct GenerizationReport {
  DegreeMatrixSpec spec;
  DegreeMatrixSpec reduced;
  std::size_t row = 0;  // 1-based
  std::size_t col = 0;
  std::optional<GradedMatrix> special;  // zero at the corner (u = 0)
  std::optional<GradedMatrix> general;  // unit at the corner (u = 1)
  CodimensionReport special_codim;
  CodimensionReport general_codim;
  BettiTable special_table;
  BettiTable general_table;
  BettiTable en_full;
  BettiTable en_reduced;
  BettiTable attributable;  // en_full - en_reduced
  BettiTable removed;       // special_table - general_table, when nonnegative
  GhostLedger special_ghosts;
  GhostLedger general_ghosts;  // what persists
  bool hilbert_agree = false;
  int hilbert_checked_to = 0;
  bool removes_exactly_corner_ghosts = false;
  bool schur_complement_equal = false;  // I_t(general) = I_{t-1}(eliminated matrix)
  std::size_t bordered_trials = 0;
  std::size_t bordered_equal = 0;
  // "witnessed" when the special sample is standard with a Betti number above
  // EN(b_î;a_ĵ), so it lies outside the reduced stratum; else "not witnessed".
  std::string nonemptiness;
  std::vector<std::string> findings;

  bool ok() const {
    return hilbert_agree && removes_exactly_corner_ghosts && schur_complement_equal &&
           bordered_equal == bordered_trials;
  }
};

// Samples the u = 0 member of the family with spec.seed (explicit entries
// kept, the corner forced to zero), takes u = 1 with all other entries equal,
// and compares. Throws EmptyStratum when either stratum is empty.
GenerizationReport verify_generization(const DegreeMatrixSpec& spec, std::size_t i, std::size_t j,
                                       std::size_t bordered_trials = 10);

// Table difference by homological degree; removed summands are marked.
std::string betti_diff_text(const BettiTable& before, const BettiTable& after);
// "R(-4)^2 + R(-3)" style listing of one homological degree.
std::string summands_text(const BettiTable& table, int i);

std::string to_json(const GhostLedger& ledger, int indent = 2);
std::string to_json(const GenerizationReport& report, int indent = 2);
std::string to_text(const GenerizationReport& report);

}  // namespace detstrata
