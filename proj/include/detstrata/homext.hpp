#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "detstrata/determinantal.hpp"
#include "detstrata/graded.hpp"

namespace detstrata {

struct HomExtOptions {
  int max_level = 3;
  // Internal degree cap; defaults to (max minor degree) + n + 3.
  std::optional<int> degree_bound;
};

// A map G* -> F* in degree zero: eta[i][j] has degree a_j - b_i.
using EtaMatrix = std::vector<std::vector<Polynomial>>;

struct Ext1R {
  std::size_t dimension = 0;
  std::size_t hom_G_M = 0;  // Σ_j H_M(a_j)
  std::size_t hom_F_M = 0;  // Σ_i H_M(b_i)
  std::size_t rank = 0;     // of 0Hom(F*,M) -> 0Hom(G*,M)
  std::size_t hom_M_M = 0;
  std::vector<EtaMatrix> cocycles;  // lifts of a basis of 0Ext^1_R(M,M)
};

struct ExtValue {
  std::size_t dimension = 0;
  bool exact = false;
  int degree_bound = 0;  // internal degree the resolution was computed to
  int max_level = 0;
  // "artinian" (bounded by the top degree of the target module),
  // "certified" (all generator degrees found below the cap) or "truncated".
  std::string method;
};

struct ConormalExt {
  ExtValue hom;
  ExtValue ext1;
};

struct FiveTermDegreeZero {
  std::size_t hom_A_MM = 0;
  std::size_t ext1_R = 0;
  std::size_t hom_I_A = 0;
  std::size_t dim_E2 = 0;         // 0Hom_R(I, Hom_A(M,M))
  std::size_t rank_eM = 0;        // rank of e_M(D) on 0Ext^1_R(M,M)
  std::size_t rank_delta0 = 0;    // rank of i_{A,M} after e_M(D)
  std::size_t rank_i = 0;         // rank of i_{A,M} on 0Hom_R(I,A)
  std::size_t ext1_A = 0;         // ext1_R - rank_delta0
  std::size_t ker_ext2 = 0;       // dim ker(0Ext^2_A -> 0Ext^2_R) = dim_E2 - rank_delta0
  bool delta0_injective = false;  // 0Ext^1_A(M,M) = 0
  bool delta0_surjective = false; // 0Ext^2_A(M,M) -> 0Ext^2_R(M,M) injective
  bool i_is_iso = false;          // 0Hom(I,A) = E2 through i_{A,M}
  // Def_{M/R}(D) -> 0Hom(I,A) and 0Hom(I,A) -> E2 fail to be isomorphisms.
  bool first_inclusion_strict = false;
  bool second_inclusion_strict = false;
};

// Degree-zero Hom/Ext data attached to one standard determinantal matrix.
// Quotient rings are built lazily and cached per degree bound.
class HomExtContext {
 public:
  explicit HomExtContext(GradedMatrix m, HomExtOptions options = {});

  const GradedMatrix& matrix() const noexcept { return m_; }
  const HomExtOptions& options() const noexcept { return options_; }
  int degree_bound() const noexcept { return bound_; }
  // Nonzero maximal minors and the R-presentation of I they generate.
  const std::vector<Polynomial>& minors() const noexcept { return minors_; }
  const std::vector<int>& minor_degrees() const noexcept { return minor_degrees_; }
  const GradedModulePresentation& ideal_presentation() const noexcept { return ideal_pres_; }

  const GradedQuotient& A(int bound);
  const GradedQuotient& M(int bound);

  std::size_t hom_A_MM();
  const Ext1R& ext1_R_MM();
  // Columns are e_M(D)(eta) in ⊕_J A_{deg f_J}, one column per eta. Each image
  // is checked against every syzygy of I; throws SyzygyIncompatible.
  ExactMatrix tangent_map_eM(const std::vector<EtaMatrix>& etas);
  std::size_t hom_I_A();
  // Basis of 0Hom_R(I,A) in ⊕_J A_{deg f_J}.
  const std::vector<Vector>& hom_I_A_basis();
  const FiveTermDegreeZero& five_term();
  ExtValue ext_A_MM(std::size_t i);
  ConormalExt ext1_A_conormal();

 private:
  // Ext^0..Ext^imax over A of coker(pres) into p, resolving over A.
  std::vector<ExtValue> ext_over_A(const GradedModulePresentation& pres, const GradedQuotient& p, std::size_t imax);
  // Largest generator degree through the given number of differentials of a
  // minimal A-resolution of coker(pres); nullopt when the cap cuts it.
  std::optional<int> certified_span(const GradedModulePresentation& pres, std::size_t levels);
  // N = ⊕_i M(b_i), which contains Hom_A(M,M).
  const GradedQuotient& N(int bound);
  // g ∈ ⊕_J A_{deg f_J} to (g_J id_M)_J in ⊕_J N_{deg f_J}.
  Vector identity_times(std::span<const Residue> g);

  GradedMatrix m_;
  HomExtOptions options_;
  int bound_;
  std::vector<Polynomial> minors_;
  std::vector<int> minor_degrees_;
  std::vector<std::vector<std::size_t>> minor_columns_;
  std::vector<std::vector<std::size_t>> zero_minor_columns_;
  GradedModulePresentation ideal_pres_;
  int syz_top_ = 0;
  std::map<int, GradedQuotient> a_cache_, m_cache_, n_cache_;
  std::optional<Ext1R> ext1_R_;
  std::optional<std::vector<Vector>> hom_I_A_;
  std::optional<FiveTermDegreeZero> five_;
};

// Free-function forms over a fresh context.
std::size_t hom_A_MM(const GradedMatrix& m);
Ext1R ext1_R_MM(const GradedMatrix& m);
std::size_t hom_I_A(const GradedMatrix& m);
FiveTermDegreeZero five_term_degree_zero(const GradedMatrix& m, HomExtOptions options = {});
ExtValue ext_A_MM_truncated(const GradedMatrix& m, std::size_t i, HomExtOptions options = {});
ConormalExt ext1_A_conormal(const GradedMatrix& m, HomExtOptions options = {});

// e_M(D)(eta)_J = tr(adj(phi_J*) eta_J) as a polynomial, column sets J in
// lexicographic order (all of them, zero minors included).
std::vector<Polynomial> trace_of_adjoint(const GradedMatrix& m, const EtaMatrix& eta);

}  // namespace detstrata
