#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "detstrata/groebner.hpp"

namespace detstrata {

// Degree matrix (b; a) with b ascending of length t and a ascending of length
// t+c-1; entry (i, j) has degree a_j - b_i.
struct DegreeMatrixSpec {
  int n = 2;  // R = k[x0..xn]
  std::uint32_t p = kDefaultPrime;
  std::vector<int> b;
  std::vector<int> a;
  std::uint64_t seed = 0;
  // Per-entry polynomial text overriding the random draw; empty rows or
  // nullopt cells are sampled.
  std::vector<std::vector<std::optional<std::string>>> explicit_entries;
  // Give degree-zero entries random nonzero constants instead of zero.
  bool allow_constants = false;

  std::size_t t() const noexcept { return b.size(); }
  std::size_t columns() const noexcept { return a.size(); }
  int c() const noexcept { return static_cast<int>(a.size()) - static_cast<int>(b.size()) + 1; }
  int degree(std::size_t i, std::size_t j) const { return a.at(j) - b.at(i); }

  // Throws InvalidInput.
  void validate() const;
  PolyRing ring() const;
  std::string to_text() const;  // "(b1,..;a0,..) n=.."

  bool operator==(const DegreeMatrixSpec&) const = default;
};

// A homogeneous t x (t+c-1) matrix representing phi*: G* -> F*, with
// G* = ⊕R(-a_j) and F* = ⊕R(-b_i).
class GradedMatrix {
 public:
  GradedMatrix(DegreeMatrixSpec spec, const PolyRing& ring, std::vector<std::vector<Polynomial>> entries);

  const DegreeMatrixSpec& spec() const noexcept { return spec_; }
  const PolyRing& ring() const noexcept { return ring_; }
  std::size_t rows() const noexcept { return entries_.size(); }
  std::size_t cols() const noexcept { return spec_.a.size(); }
  const Polynomial& entry(std::size_t i, std::size_t j) const { return entries_.at(i).at(j); }
  const std::vector<std::vector<Polynomial>>& entries() const noexcept { return entries_; }

  // M = coker phi*: generators in degrees b_i, relations (columns) in degrees a_j.
  GradedModulePresentation presentation() const;
  // B = coker(phi: F -> G): generators in degrees -a_j, relations in degrees -b_i.
  GradedModulePresentation transpose_presentation() const;
  // The matrix of the first k columns (same rows).
  GradedMatrix first_columns(std::size_t k) const;

  Polynomial minor(const std::vector<std::size_t>& rows, const std::vector<std::size_t>& cols) const;
  // All k x k minors, row subsets outermost, both in lexicographic order.
  std::vector<Polynomial> minors(std::size_t k) const;
  // The t x t minors with column sets in lexicographic order.
  std::vector<Polynomial> maximal_minors() const;
  std::vector<std::vector<std::size_t>> maximal_minor_columns() const;
  int maximal_minor_degree(const std::vector<std::size_t>& cols) const;

  std::string to_text() const;

 private:
  DegreeMatrixSpec spec_;
  PolyRing ring_;
  std::vector<std::vector<Polynomial>> entries_;
};

// Deterministic in spec.seed.
GradedMatrix sample_matrix(const DegreeMatrixSpec& spec);

enum class Goodness { good, not_good, vacuous };
const char* to_string(Goodness g);

struct CodimensionReport {
  int codim_maximal = 0;     // codim I_t; n+2 for the unit ideal
  int codim_submaximal = 0;  // codim I_{t-1}
  bool standard = false;
  Goodness good = Goodness::not_good;
  bool artinian = false;
};

CodimensionReport codimension_check(const GradedMatrix& m);

struct StandardSample {
  GradedMatrix matrix;
  CodimensionReport codim;
  std::vector<std::uint64_t> seeds_tried;
};

// Samples with spec.seed, spec.seed+1, ... until the ideal of maximal minors
// has codimension c, at most max_tries times. The last attempt is returned
// either way and codim.standard tells which.
StandardSample sample_standard(const DegreeMatrixSpec& spec, int max_tries = 8);

struct FlagStep {
  std::size_t index;                    // i = 2..c
  GradedMatrix matrix;                  // first t+i-1 columns
  std::vector<Polynomial> ideal;        // I(D_i)
  GradedModulePresentation module;      // M_i
  GradedModulePresentation transposed;  // B_i
};

// Throws NotStandard when some I(D_i) does not have codimension i.
std::vector<FlagStep> build_flag(const GradedMatrix& m);

// dim (coker pres)_d by the rank of the presentation in degree d.
std::size_t cokernel_dimension(const PolyRing& ring, const GradedModulePresentation& pres, int d);
std::size_t hilbert_function_M(const GradedMatrix& m, int d);

// Closed-form shapes. The Eagon-Northcott table resolves A with R in
// position 0; the Buchsbaum-Rim table resolves M with F* in position 0 and
// G* in position 1.
BettiTable eagon_northcott_betti(const DegreeMatrixSpec& spec);
BettiTable buchsbaum_rim_betti(const DegreeMatrixSpec& spec);

// Σ_i (-1)^i Σ_j β_ij dim R_{d-j} for R with n+1 variables.
std::int64_t alternating_hilbert(const BettiTable& table, int n, int d);

}  // namespace detstrata
