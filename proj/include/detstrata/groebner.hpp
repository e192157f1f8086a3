#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "detstrata/arith.hpp"
#include "detstrata/poly.hpp"

namespace detstrata {

// ⊕_k R(-e_k), stored as the generator degrees e_k.
class GradedFreeModule {
 public:
  GradedFreeModule() = default;
  explicit GradedFreeModule(std::vector<int> twists) : twists_(std::move(twists)) {}

  std::size_t rank() const noexcept { return twists_.size(); }
  int twist(std::size_t k) const { return twists_.at(k); }
  const std::vector<int>& twists() const noexcept { return twists_; }
  std::size_t piece_dimension(const PolyRing& ring, int d) const;
  GradedFreeModule direct_sum(const GradedFreeModule& other) const;
  int max_twist() const;
  int min_twist() const;

  bool operator==(const GradedFreeModule&) const = default;

 private:
  std::vector<int> twists_;
};

struct ModuleElement {
  std::vector<Polynomial> components;

  ModuleElement() = default;
  explicit ModuleElement(std::vector<Polynomial> comps) : components(std::move(comps)) {}
  static ModuleElement zero(std::size_t rank) { return ModuleElement(std::vector<Polynomial>(rank)); }

  bool is_zero() const noexcept;
  bool operator==(const ModuleElement&) const = default;
};

// Total degree of a homogeneous element; nullopt for zero. Throws InvalidInput
// when components disagree.
std::optional<int> element_degree(const ModuleElement& f, const GradedFreeModule& ambient);

// A degree-preserving map source -> target; column k is the image of the k-th
// source generator.
struct GradedMap {
  GradedFreeModule source;
  GradedFreeModule target;
  std::vector<ModuleElement> columns;

  const Polynomial& entry(std::size_t row, std::size_t col) const {
    return columns.at(col).components.at(row);
  }
};

// coker(source -> target).
using GradedModulePresentation = GradedMap;

// Dense coordinates of F_d, ordered position over term: component 0 first and
// grevlex-descending inside each component. Index order is the module order,
// so the first nonzero coordinate is the leading term.
class DegreePiece {
 public:
  DegreePiece(const PolyRing& ring, const GradedFreeModule& module, int d);

  int degree() const noexcept { return d_; }
  std::size_t dimension() const noexcept { return offsets_.back(); }
  std::size_t offset(std::size_t k) const { return offsets_[k]; }
  std::size_t block_size(std::size_t k) const { return offsets_[k + 1] - offsets_[k]; }
  std::size_t index(std::size_t k, const Monomial& m) const {
    return offsets_[k] + ring_->monomial_index(m);
  }
  std::pair<std::size_t, const Monomial*> decode(std::size_t idx) const;

  Vector dense(const ModuleElement& f) const;
  ModuleElement sparse(std::span<const Residue> v) const;

 private:
  const PolyRing* ring_;
  const GradedFreeModule* module_;
  int d_;
  std::vector<std::size_t> offsets_;
};

struct ModuleTerm {
  std::uint32_t component;
  Monomial monomial;
  Residue coefficient;
};
// Terms in descending module order; first term is leading.
using SparseElement = std::vector<ModuleTerm>;

class GroebnerBasis {
 public:
  GroebnerBasis(PolyRing ring, GradedFreeModule ambient, std::vector<SparseElement> elements,
                bool complete, std::optional<int> degree_bound);

  const PolyRing& ring() const noexcept { return ring_; }
  const GradedFreeModule& ambient() const noexcept { return ambient_; }
  std::size_t size() const noexcept { return elements_.size(); }
  const SparseElement& sparse(std::size_t k) const { return elements_[k]; }
  ModuleElement element(std::size_t k) const;
  std::vector<ModuleElement> elements() const;
  int degree(std::size_t k) const { return degrees_[k]; }
  // False when the computation stopped at a degree bound with pairs left over;
  // the basis is then valid only through degree_bound().
  bool complete() const noexcept { return complete_; }
  std::optional<int> degree_bound() const noexcept { return bound_; }
  bool is_unit_ideal() const;

  ModuleElement normal_form(const ModuleElement& f) const;
  // Full reduction of a vector of F_d coordinates.
  void reduce_dense(const DegreePiece& piece, Vector& v) const;
  bool contains(const ModuleElement& f) const { return normal_form(f).is_zero(); }
  // Index of an element whose leading term divides (k, m), if any.
  std::optional<std::size_t> reducer(std::size_t k, const Monomial& m) const;
  std::vector<Monomial> leading_monomials(std::size_t component) const;
  // dim (F/U)_d counted from standard monomials.
  std::size_t quotient_dimension(int d) const;

  bool operator==(const GroebnerBasis& other) const;

 private:
  void check_degree(int d) const;

  PolyRing ring_;
  GradedFreeModule ambient_;
  std::vector<SparseElement> elements_;
  std::vector<int> degrees_;
  std::vector<std::vector<std::pair<Monomial, std::size_t>>> by_component_;
  bool complete_;
  std::optional<int> bound_;
};

struct BuchbergerOptions {
  std::optional<int> max_degree;
};

// Reduced basis of the submodule generated by gens.
GroebnerBasis buchberger(const PolyRing& ring, const GradedFreeModule& ambient,
                         const std::vector<ModuleElement>& gens, BuchbergerOptions options = {});

struct MinimalGenerators {
  std::vector<std::size_t> indices;  // positions into the candidate list
  GroebnerBasis basis;               // of <pregens, candidates>
};

// Minimal generators of <pregens, candidates> modulo <pregens>: the candidates
// that are not in the span of lower-degree elements and earlier candidates.
MinimalGenerators minimal_generators(const PolyRing& ring, const GradedFreeModule& ambient,
                                     const std::vector<ModuleElement>& pregens,
                                     const std::vector<ModuleElement>& candidates,
                                     BuchbergerOptions options = {});

// dim R/I from the initial ideal; -1 for the unit ideal.
int krull_dimension(const GroebnerBasis& gb);

struct SyzygyOptions {
  std::optional<int> max_degree;
  // Work over R/(quotient_ideal).
  std::vector<Polynomial> quotient_ideal;
};

// Minimal generators of the syzygies of the columns of map, as a map into
// map.source. complete is false when the degree bound cut the computation.
struct SyzygyResult {
  GradedMap syzygies;
  bool complete;
};
SyzygyResult syzygies(const PolyRing& ring, const GradedMap& map, SyzygyOptions options = {});

class BettiTable {
 public:
  void add(int i, int j, std::size_t count = 1);
  std::size_t at(int i, int j) const;
  const std::map<std::pair<int, int>, std::size_t>& entries() const noexcept { return entries_; }
  std::size_t total(int i) const;
  // Largest homological index with a nonzero entry; -1 if empty.
  int length() const;
  bool empty() const noexcept { return entries_.empty(); }
  std::pair<int, int> degree_range() const;
  // Shift homological indices by delta, dropping negative ones.
  BettiTable shifted(int delta) const;

  std::string to_text() const;
  bool operator==(const BettiTable&) const = default;

 private:
  std::map<std::pair<int, int>, std::size_t> entries_;  // zero entries are never stored
};

struct ResolutionOptions {
  std::optional<int> max_level;
  std::optional<int> max_degree;
  std::vector<Polynomial> quotient_ideal;
};

struct FreeResolution {
  std::vector<GradedFreeModule> modules;  // F_0, F_1, ...
  std::vector<GradedMap> differentials;   // differentials[i]: F_{i+1} -> F_i
  BettiTable betti;
  bool truncated = false;
};

// Over R throws TruncationExceeded when the degree bound is too small. Over a
// quotient ring the result is cut at the bounds and flagged truncated.
FreeResolution minimal_free_resolution(const PolyRing& ring, const GradedModulePresentation& pres,
                                       ResolutionOptions options = {});

// Splits off constant entries in place (Gaussian elimination, first constant
// found in column-major order).
void prune_constants(const PolyRing& ring, FreeResolution& res);

BettiTable betti_of(const std::vector<GradedFreeModule>& modules);

}  // namespace detstrata
