#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "detstrata/determinantal.hpp"

namespace detstrata {

using BigInt = boost::multiprecision::cpp_int;

// C(x, n) with the convention C(x, n) = 0 for x < n.
BigInt binomial(std::int64_t x, int n);
// Narrows to int64, throwing InvalidInput on overflow.
std::int64_t to_int64(const BigInt& v);

std::int64_t lambda_c(const DegreeMatrixSpec& spec);
// ℓ_3..ℓ_c and h_0..h_{c-3}.
std::vector<std::int64_t> ell_values(const DegreeMatrixSpec& spec);
std::vector<std::int64_t> h_values(const DegreeMatrixSpec& spec);
// K_3..K_c; empty for c = 2. Negative values are returned as computed.
std::vector<std::int64_t> K_values(const DegreeMatrixSpec& spec);
// λ_c + ΣK
std::int64_t lambda(const DegreeMatrixSpec& spec);

struct AutB {
  std::int64_t value = 1;
  // The identity needs 0hom(M,M) = 1; records whether that was checked.
  bool hom_MM_verified = false;
};
AutB aut_B(const DegreeMatrixSpec& spec, bool hom_MM_verified = false);

// a_{i-1} >= b_i for all i, strictly for some i.
bool nonempty(const DegreeMatrixSpec& spec);

// Σ_{i,j} h(a_j-b_i) + Σ h(b_i-a_j) - Σ h(a_i-a_j) - Σ h(b_i-b_j) + 1 for a
// Hilbert function h of the base ring; c must be 2.
std::int64_t lambda_quotient_c2(const std::function<std::int64_t(int)>& hilbert, const DegreeMatrixSpec& spec);

struct DimensionFormula {
  std::int64_t lambda = 0;
  std::int64_t dim_via_HM = 0;
};
// Σ_j H_M(a_j) - Σ_i H_M(b_i) + 1 with H_M from the given matrix.
std::int64_t dimension_via_hilbert(const GradedMatrix& m);
// Throws EmptyStratum when nonempty(spec) fails; samples a standard matrix.
DimensionFormula dimension_formula(const DegreeMatrixSpec& spec);

struct StratumInvariants {
  std::int64_t lambda_c = 0;
  std::vector<std::int64_t> K;
  std::vector<std::int64_t> ell;
  std::vector<std::int64_t> h;
  std::int64_t lambda = 0;
  std::optional<std::int64_t> dim_via_HM;
  bool nonempty = false;
  AutB aut_B;
};

// Closed-form part only; dim_via_HM is filled when a matrix is given.
StratumInvariants stratum_invariants(const DegreeMatrixSpec& spec, const GradedMatrix* sample = nullptr);

}  // namespace detstrata
