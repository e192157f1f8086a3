#pragma once

#include <memory>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "detstrata/groebner.hpp"

namespace detstrata {

// Q = F / U for a free module F and a homogeneous submodule U, with normal
// form tables for every degree up to a fixed bound. Coordinates of Q_d are
// indexed by the standard monomials of F_d (not in the initial module), in
// module order. Immutable and cheap to copy.
class GradedQuotient {
 public:
  GradedQuotient(const PolyRing& ring, GradedFreeModule ambient, const std::vector<ModuleElement>& relations,
                 int max_degree);
  // The ring R itself (no relations).
  static GradedQuotient free(const PolyRing& ring, GradedFreeModule ambient, int max_degree);

  const PolyRing& ring() const noexcept;
  const GradedFreeModule& ambient() const noexcept;
  int max_degree() const noexcept;
  const GroebnerBasis& basis() const noexcept;

  // Throws TruncationExceeded above max_degree.
  std::size_t dimension(int d) const;
  // Ambient component and monomial of the pos-th standard basis element of Q_d.
  std::pair<std::size_t, Monomial> standard_monomial(int d, std::size_t pos) const;

  Vector reduce(int d, std::span<const Residue> ambient_coordinates) const;
  Vector normal_form(const ModuleElement& f, int d) const;
  // Q_d -> Q_{d+deg u}
  Vector multiply(int d, std::span<const Residue> q, const Monomial& u) const;
  // f homogeneous polynomial; Q_d -> Q_{d+deg f}
  Vector multiply(int d, std::span<const Residue> q, const Polynomial& f) const;
  ModuleElement lift(int d, std::span<const Residue> q) const;
  Polynomial lift_scalar(int d, std::span<const Residue> q) const;  // rank one only

  // Largest degree with Q_d != 0 when Q is seen to vanish from some degree on
  // (at or above every generator degree) inside the computed range.
  std::optional<int> top_degree() const;

 private:
  struct Impl;
  explicit GradedQuotient(std::shared_ptr<const Impl> impl) : impl_(std::move(impl)) {}
  std::shared_ptr<const Impl> impl_;
};

// ⊕_k A(-e_k) for a graded ring A given as a rank-one GradedQuotient.
class QuotientFreeModule {
 public:
  QuotientFreeModule(GradedQuotient ring, std::vector<int> twists);

  const GradedQuotient& base() const noexcept { return a_; }
  const std::vector<int>& twists() const noexcept { return twists_; }
  std::size_t rank() const noexcept { return twists_.size(); }
  std::size_t dimension(int d) const;
  std::size_t offset(int d, std::size_t k) const;
  std::size_t block(int d, std::size_t k) const;
  Vector multiply(int d, std::span<const Residue> v, const Monomial& u) const;
  // v has degree d. Returns the A-coefficient of block k, an element of A_{d-e_k}.
  std::span<const Residue> component(int d, std::span<const Residue> v, std::size_t k) const;

 private:
  GradedQuotient a_;
  std::vector<int> twists_;
};

// Minimal graded free resolution over A computed degree by degree through a
// fixed internal degree: level i generators are a complement of m*K in K,
// K the kernel of the previous differential.
class LinearResolution {
 public:
  struct Level {
    std::vector<int> degrees;
    std::vector<Vector> images;  // coordinates in the previous level at that degree
  };

  // relations: (degree, coordinates in (Q_0)_degree) generating the kernel of
  // Q_0 -> N.
  LinearResolution(GradedQuotient ring, std::vector<int> q0_twists,
                   const std::vector<std::pair<int, Vector>>& relations, int max_level, int max_degree);

  const GradedQuotient& base() const noexcept { return a_; }
  int max_degree() const noexcept { return max_degree_; }
  std::size_t levels() const noexcept { return levels_.size(); }
  const Level& level(std::size_t i) const { return levels_.at(i); }
  QuotientFreeModule module(std::size_t i) const { return QuotientFreeModule(a_, levels_.at(i).degrees); }
  BettiTable betti() const;

 private:
  GradedQuotient a_;
  int max_degree_;
  std::vector<Level> levels_;
};

struct ExtResult {
  std::size_t dimension = 0;
  bool truncated = false;
};

// dim Ext^i_A(N, P)_0 from a resolution of N, P an A-module quotient.
// Generators above the resolution's degree bound are unseen; the result is
// exact when P vanishes above that bound.
ExtResult ext_degree_zero(const LinearResolution& res, const GradedQuotient& p, std::size_t i);

// The matrix of Hom(Q_i, P)_0 -> Hom(Q_{i+1}, P)_0.
ExactMatrix hom_differential(const LinearResolution& res, const GradedQuotient& p, std::size_t i);

// Hom(N, P)_0 for N = coker(pres) over R and P an R-module quotient; returns
// a basis, each vector in ⊕_k P_{e_k} (concatenated).
std::vector<Vector> hom_degree_zero(const GradedModulePresentation& pres, const GradedQuotient& p);

}  // namespace detstrata
