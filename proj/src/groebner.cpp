#include "detstrata/groebner.hpp"

#include <algorithm>
#include <bit>
#include <numeric>
#include <set>
#include <sstream>

#include "detstrata/errors.hpp"

namespace detstrata {

std::size_t GradedFreeModule::piece_dimension(const PolyRing& ring, int d) const {
  std::size_t total = 0;
  for (int e : twists_) total += ring.piece_dimension(d - e);
  return total;
}

GradedFreeModule GradedFreeModule::direct_sum(const GradedFreeModule& other) const {
  std::vector<int> t = twists_;
  t.insert(t.end(), other.twists_.begin(), other.twists_.end());
  return GradedFreeModule(std::move(t));
}

int GradedFreeModule::max_twist() const {
  if (twists_.empty()) throw InvalidInput("max_twist of the zero module");
  return *std::max_element(twists_.begin(), twists_.end());
}

int GradedFreeModule::min_twist() const {
  if (twists_.empty()) throw InvalidInput("min_twist of the zero module");
  return *std::min_element(twists_.begin(), twists_.end());
}

bool ModuleElement::is_zero() const noexcept {
  for (const auto& c : components)
    if (!c.is_zero()) return false;
  return true;
}

std::optional<int> element_degree(const ModuleElement& f, const GradedFreeModule& ambient) {
  if (f.components.size() != ambient.rank())
    throw InvalidInput("module element has the wrong number of components");
  std::optional<int> deg;
  for (std::size_t k = 0; k < f.components.size(); ++k) {
    const Polynomial& c = f.components[k];
    if (c.is_zero()) continue;
    if (!c.is_homogeneous()) throw InvalidInput("module element is not homogeneous");
    int d = c.degree() + ambient.twist(k);
    if (deg && *deg != d) throw InvalidInput("module element is not homogeneous");
    deg = d;
  }
  return deg;
}

DegreePiece::DegreePiece(const PolyRing& ring, const GradedFreeModule& module, int d)
    : ring_(&ring), module_(&module), d_(d) {
  offsets_.reserve(module.rank() + 1);
  offsets_.push_back(0);
  for (std::size_t k = 0; k < module.rank(); ++k)
    offsets_.push_back(offsets_.back() + ring.piece_dimension(d - module.twist(k)));
}

std::pair<std::size_t, const Monomial*> DegreePiece::decode(std::size_t idx) const {
  auto it = std::upper_bound(offsets_.begin(), offsets_.end(), idx);
  std::size_t k = static_cast<std::size_t>(it - offsets_.begin()) - 1;
  const auto& mons = ring_->monomials_of_degree(d_ - module_->twist(k));
  return {k, &mons[idx - offsets_[k]]};
}

Vector DegreePiece::dense(const ModuleElement& f) const {
  Vector v(dimension(), 0);
  for (std::size_t k = 0; k < f.components.size(); ++k)
    for (const Term& t : f.components[k].terms()) {
      if (t.monomial.degree() != d_ - module_->twist(k))
        throw InvalidInput("element does not live in this degree");
      v[index(k, t.monomial)] = t.coefficient;
    }
  return v;
}

ModuleElement DegreePiece::sparse(std::span<const Residue> v) const {
  ModuleElement f = ModuleElement::zero(module_->rank());
  for (std::size_t k = 0; k < module_->rank(); ++k)
    f.components[k] = ring_->from_dense(d_ - module_->twist(k), v.subspan(offsets_[k], block_size(k)));
  return f;
}

namespace {

bool term_greater(const ModuleTerm& a, const ModuleTerm& b) {
  if (a.component != b.component) return a.component < b.component;
  return grevlex(a.monomial, b.monomial) == std::strong_ordering::greater;
}

SparseElement to_sparse(const ModuleElement& f) {
  SparseElement out;
  for (std::size_t k = 0; k < f.components.size(); ++k)
    for (const Term& t : f.components[k].terms())
      out.push_back({static_cast<std::uint32_t>(k), t.monomial, t.coefficient});
  return out;  // component-major and descending inside: already in module order
}

ModuleElement to_module(const SparseElement& s, std::size_t rank) {
  std::vector<std::vector<Term>> comps(rank);
  for (const ModuleTerm& t : s) comps[t.component].push_back({t.monomial, t.coefficient});
  ModuleElement f = ModuleElement::zero(rank);
  for (std::size_t k = 0; k < rank; ++k) f.components[k] = Polynomial::from_sorted_terms(std::move(comps[k]));
  return f;
}

SparseElement dense_to_sparse(const DegreePiece& piece, const Vector& v) {
  SparseElement out;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (!v[i]) continue;
    auto [k, m] = piece.decode(i);
    out.push_back({static_cast<std::uint32_t>(k), *m, v[i]});
  }
  return out;
}

void add_to_dense(const PrimeField& f, const DegreePiece& piece, Vector& v, const SparseElement& g,
                  const Monomial& shift, Residue scale) {
  for (const ModuleTerm& t : g) {
    std::size_t j = piece.index(t.component, shift * t.monomial);
    v[j] = f.add(v[j], f.mul(scale, t.coefficient));
  }
}

constexpr std::int32_t kUnknown = -2;
constexpr std::int32_t kIrreducible = -1;

// Homogeneous Buchberger, degree by degree, normal selection strategy.
class Engine {
 public:
  Engine(const PolyRing& ring, const GradedFreeModule& ambient)
      : ring_(ring), ambient_(ambient), field_(ring.field()), by_component_(ambient.rank()) {}

  // tag < 0 marks an input whose minimality is not tracked.
  void add_input(const ModuleElement& f, std::int64_t tag) {
    auto deg = element_degree(f, ambient_);
    if (!deg) {
      if (tag >= 0) mark(tag, false);
      return;
    }
    inputs_.push_back({*deg, to_sparse(f), tag});
  }

  void run(std::optional<int> max_degree) {
    std::stable_sort(inputs_.begin(), inputs_.end(),
                     [](const Input& a, const Input& b) { return a.degree < b.degree; });
    std::size_t next_input = 0;
    while (true) {
      std::optional<int> d;
      if (next_input < inputs_.size()) d = inputs_[next_input].degree;
      for (const Pair& p : pairs_)
        if (!d || p.degree < *d) d = p.degree;
      if (!d) {
        complete_ = true;
        return;
      }
      if (max_degree && *d > *max_degree) {
        complete_ = false;
        return;
      }
      process_degree(*d, next_input);
    }
  }

  bool complete() const { return complete_; }
  const std::vector<SparseElement>& basis() const { return basis_; }
  bool minimal(std::int64_t tag) const {
    auto it = minimal_.find(tag);
    return it != minimal_.end() && it->second;
  }

  // Interreduced, monic, canonically sorted copy of the basis.
  std::vector<SparseElement> reduced_basis() const {
    std::vector<SparseElement> out;
    std::map<int, std::unique_ptr<Level>> levels;
    for (std::size_t k = 0; k < basis_.size(); ++k) {
      int d = degrees_[k];
      auto& lvl = levels[d];
      if (!lvl) lvl = std::make_unique<Level>(ring_, ambient_, d);
      Vector v(lvl->piece.dimension(), 0);
      add_to_dense(field_, lvl->piece, v, basis_[k], Monomial{}, 1);
      std::size_t lead = lvl->piece.index(basis_[k][0].component, basis_[k][0].monomial);
      v[lead] = 0;
      reduce(*lvl, v, lead + 1);
      v[lead] = 1;
      out.push_back(dense_to_sparse(lvl->piece, v));
    }
    std::vector<std::size_t> order(out.size());
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
      if (degrees_[a] != degrees_[b]) return degrees_[a] < degrees_[b];
      return term_greater(out[a][0], out[b][0]);
    });
    std::vector<SparseElement> sorted;
    for (std::size_t k : order) sorted.push_back(std::move(out[k]));
    return sorted;
  }

 private:
  struct Input {
    int degree;
    SparseElement element;
    std::int64_t tag;
  };
  struct Pair {
    std::size_t i, j;
    Monomial lcm;
    int degree;
  };
  struct Level {
    Level(const PolyRing& ring, const GradedFreeModule& ambient, int d)
        : piece(ring, ambient, d), reducer(piece.dimension(), kUnknown) {}
    DegreePiece piece;
    std::vector<std::int32_t> reducer;
  };

  void mark(std::int64_t tag, bool value) { minimal_[tag] = value; }

  int lt_degree(std::size_t k) const { return degrees_[k]; }

  std::int32_t find_reducer(Level& lvl, std::size_t idx) const {
    std::int32_t& r = lvl.reducer[idx];
    if (r != kUnknown) return r;
    auto [k, m] = lvl.piece.decode(idx);
    r = kIrreducible;
    for (std::size_t g : by_component_[k])
      if (basis_[g][0].monomial.divides(*m)) {
        r = static_cast<std::int32_t>(g);
        break;
      }
    return r;
  }

  void reduce(Level& lvl, Vector& v, std::size_t from = 0) const {
    for (std::size_t idx = from; idx < v.size(); ++idx) {
      Residue c = v[idx];
      if (!c) continue;
      std::int32_t r = find_reducer(lvl, idx);
      if (r < 0) continue;
      const SparseElement& g = basis_[r];
      auto [k, m] = lvl.piece.decode(idx);
      Monomial shift = m->divided_by(g[0].monomial);
      Residue neg = field_.neg(c);
      for (std::size_t t = 1; t < g.size(); ++t) {
        std::size_t j = lvl.piece.index(g[t].component, shift * g[t].monomial);
        v[j] = field_.add(v[j], field_.mul(neg, g[t].coefficient));
      }
      v[idx] = 0;
    }
  }

  // Returns true when v reduced to something nonzero, which is then added.
  bool insert(Level& lvl, Vector& v) {
    reduce(lvl, v);
    std::size_t lead = 0;
    while (lead < v.size() && v[lead] == 0) ++lead;
    if (lead == v.size()) return false;
    Residue inv = field_.inv(v[lead]);
    for (std::size_t i = lead; i < v.size(); ++i)
      if (v[i]) v[i] = field_.mul(v[i], inv);
    std::size_t h = basis_.size();
    basis_.push_back(dense_to_sparse(lvl.piece, v));
    degrees_.push_back(lvl.piece.degree());
    std::uint32_t comp = basis_[h][0].component;
    update_pairs(h);
    by_component_[comp].push_back(h);
    lvl.reducer[lead] = static_cast<std::int32_t>(h);
    return true;
  }

  // Gebauer-Moeller update for the new element h.
  void update_pairs(std::size_t h) {
    const ModuleTerm& lh = basis_[h][0];
    const Monomial& mh = lh.monomial;
    std::erase_if(pairs_, [&](const Pair& p) {
      if (basis_[p.i][0].component != lh.component) return false;
      if (!mh.divides(p.lcm)) return false;
      return !(basis_[p.i][0].monomial.lcm(mh) == p.lcm) && !(basis_[p.j][0].monomial.lcm(mh) == p.lcm);
    });
    std::vector<Pair> fresh;
    for (std::size_t i : by_component_[lh.component]) {
      Monomial l = basis_[i][0].monomial.lcm(mh);
      fresh.push_back({i, h, l, l.degree() + ambient_.twist(lh.component)});
    }
    std::vector<char> keep(fresh.size(), 1);
    for (std::size_t a = 0; a < fresh.size(); ++a)
      for (std::size_t b = 0; b < fresh.size() && keep[a]; ++b)
        if (a != b && fresh[b].lcm.divides(fresh[a].lcm) && !(fresh[b].lcm == fresh[a].lcm))
          keep[a] = 0;
    const bool ideal = ambient_.rank() == 1;
    std::vector<char> taken(fresh.size(), 0);
    for (std::size_t a = 0; a < fresh.size(); ++a) {
      if (!keep[a] || taken[a]) continue;
      bool coprime = false;
      for (std::size_t b = a; b < fresh.size(); ++b) {
        if (!keep[b] || !(fresh[b].lcm == fresh[a].lcm)) continue;
        taken[b] = 1;
        if (ideal && basis_[fresh[b].i][0].monomial.coprime(mh)) coprime = true;
      }
      if (!coprime) pairs_.push_back(fresh[a]);
    }
  }

  void process_degree(int d, std::size_t& next_input) {
    Level lvl(ring_, ambient_, d);
    std::vector<Pair> now;
    std::erase_if(pairs_, [&](const Pair& p) {
      if (p.degree != d) return false;
      now.push_back(p);
      return true;
    });
    for (const Pair& p : now) {
      Vector v(lvl.piece.dimension(), 0);
      add_to_dense(field_, lvl.piece, v, basis_[p.i], p.lcm.divided_by(basis_[p.i][0].monomial), 1);
      add_to_dense(field_, lvl.piece, v, basis_[p.j], p.lcm.divided_by(basis_[p.j][0].monomial),
                   field_.neg(1));
      insert(lvl, v);
    }
    while (next_input < inputs_.size() && inputs_[next_input].degree == d) {
      const Input& in = inputs_[next_input++];
      Vector v(lvl.piece.dimension(), 0);
      add_to_dense(field_, lvl.piece, v, in.element, Monomial{}, 1);
      bool added = insert(lvl, v);
      if (in.tag >= 0) mark(in.tag, added);
    }
  }

  const PolyRing& ring_;
  const GradedFreeModule& ambient_;
  PrimeField field_;
  std::vector<Input> inputs_;
  std::vector<Pair> pairs_;
  std::vector<SparseElement> basis_;
  std::vector<int> degrees_;
  std::vector<std::vector<std::size_t>> by_component_;
  std::map<std::int64_t, bool> minimal_;
  bool complete_ = false;
};

}  // namespace

GroebnerBasis::GroebnerBasis(PolyRing ring, GradedFreeModule ambient, std::vector<SparseElement> elements,
                             bool complete, std::optional<int> degree_bound)
    : ring_(std::move(ring)),
      ambient_(std::move(ambient)),
      elements_(std::move(elements)),
      by_component_(ambient_.rank()),
      complete_(complete),
      bound_(degree_bound) {
  for (std::size_t k = 0; k < elements_.size(); ++k) {
    const ModuleTerm& lt = elements_[k].front();
    degrees_.push_back(lt.monomial.degree() + ambient_.twist(lt.component));
    by_component_[lt.component].push_back({lt.monomial, k});
  }
}

ModuleElement GroebnerBasis::element(std::size_t k) const { return to_module(elements_[k], ambient_.rank()); }

std::vector<ModuleElement> GroebnerBasis::elements() const {
  std::vector<ModuleElement> out;
  for (std::size_t k = 0; k < elements_.size(); ++k) out.push_back(element(k));
  return out;
}

bool GroebnerBasis::is_unit_ideal() const {
  for (const auto& e : elements_)
    if (e.front().monomial.degree() == 0) return true;
  return false;
}

void GroebnerBasis::check_degree(int d) const {
  if (!complete_ && bound_ && d > *bound_)
    throw TruncationExceeded("Groebner basis only valid through degree " + std::to_string(*bound_), *bound_);
}

std::optional<std::size_t> GroebnerBasis::reducer(std::size_t k, const Monomial& m) const {
  for (const auto& [lt, idx] : by_component_[k])
    if (lt.divides(m)) return idx;
  return std::nullopt;
}

void GroebnerBasis::reduce_dense(const DegreePiece& piece, Vector& v) const {
  check_degree(piece.degree());
  const PrimeField& f = ring_.field();
  for (std::size_t idx = 0; idx < v.size(); ++idx) {
    Residue c = v[idx];
    if (!c) continue;
    auto [k, m] = piece.decode(idx);
    auto r = reducer(k, *m);
    if (!r) continue;
    const SparseElement& g = elements_[*r];
    Monomial shift = m->divided_by(g[0].monomial);
    Residue neg = f.neg(c);
    for (std::size_t t = 1; t < g.size(); ++t) {
      std::size_t j = piece.index(g[t].component, shift * g[t].monomial);
      v[j] = f.add(v[j], f.mul(neg, g[t].coefficient));
    }
    v[idx] = 0;
  }
}

ModuleElement GroebnerBasis::normal_form(const ModuleElement& f) const {
  auto d = element_degree(f, ambient_);
  if (!d) return ModuleElement::zero(ambient_.rank());
  DegreePiece piece(ring_, ambient_, *d);
  Vector v = piece.dense(f);
  reduce_dense(piece, v);
  return piece.sparse(v);
}

std::vector<Monomial> GroebnerBasis::leading_monomials(std::size_t component) const {
  std::vector<Monomial> out;
  for (const auto& [lt, idx] : by_component_.at(component)) out.push_back(lt);
  return out;
}

std::size_t GroebnerBasis::quotient_dimension(int d) const {
  check_degree(d);
  std::size_t count = 0;
  for (std::size_t k = 0; k < ambient_.rank(); ++k)
    for (const Monomial& m : ring_.monomials_of_degree(d - ambient_.twist(k)))
      if (!reducer(k, m)) ++count;
  return count;
}

bool GroebnerBasis::operator==(const GroebnerBasis& other) const {
  if (!(ambient_ == other.ambient_) || elements_.size() != other.elements_.size()) return false;
  for (std::size_t k = 0; k < elements_.size(); ++k) {
    const auto& a = elements_[k];
    const auto& b = other.elements_[k];
    if (a.size() != b.size()) return false;
    for (std::size_t t = 0; t < a.size(); ++t)
      if (a[t].component != b[t].component || !(a[t].monomial == b[t].monomial) ||
          a[t].coefficient != b[t].coefficient)
        return false;
  }
  return true;
}

GroebnerBasis buchberger(const PolyRing& ring, const GradedFreeModule& ambient,
                         const std::vector<ModuleElement>& gens, BuchbergerOptions options) {
  Engine engine(ring, ambient);
  for (const auto& g : gens) engine.add_input(g, -1);
  engine.run(options.max_degree);
  return GroebnerBasis(ring, ambient, engine.reduced_basis(), engine.complete(), options.max_degree);
}

MinimalGenerators minimal_generators(const PolyRing& ring, const GradedFreeModule& ambient,
                                     const std::vector<ModuleElement>& pregens,
                                     const std::vector<ModuleElement>& candidates,
                                     BuchbergerOptions options) {
  Engine engine(ring, ambient);
  for (const auto& g : pregens) engine.add_input(g, -1);
  for (std::size_t k = 0; k < candidates.size(); ++k) engine.add_input(candidates[k], static_cast<std::int64_t>(k));
  engine.run(options.max_degree);
  MinimalGenerators out{{}, GroebnerBasis(ring, ambient, engine.reduced_basis(), engine.complete(), options.max_degree)};
  // keep the candidate order stable by degree, as the engine saw them
  std::vector<std::size_t> idx;
  for (std::size_t k = 0; k < candidates.size(); ++k)
    if (engine.minimal(static_cast<std::int64_t>(k))) idx.push_back(k);
  std::stable_sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) {
    return *element_degree(candidates[a], ambient) < *element_degree(candidates[b], ambient);
  });
  out.indices = std::move(idx);
  return out;
}

int krull_dimension(const GroebnerBasis& gb) {
  if (gb.ambient().rank() != 1) throw InvalidInput("krull_dimension expects an ideal");
  if (!gb.complete()) throw TruncationExceeded("krull dimension needs a complete Groebner basis");
  if (gb.is_unit_ideal()) return -1;
  const std::size_t nv = gb.ring().num_variables();
  std::vector<std::uint32_t> supports;
  for (const Monomial& m : gb.leading_monomials(0)) {
    std::uint32_t s = 0;
    for (std::size_t v = 0; v < nv; ++v)
      if (m.exponent(v)) s |= 1u << v;
    supports.push_back(s);
  }
  int best = 0;
  for (std::uint32_t set = 0; set < (1u << nv); ++set) {
    int size = std::popcount(set);
    if (size <= best) continue;
    bool independent = true;
    for (std::uint32_t s : supports)
      if ((s & ~set) == 0) {
        independent = false;
        break;
      }
    if (independent) best = size;
  }
  return best;
}

SyzygyResult syzygies(const PolyRing& ring, const GradedMap& map, SyzygyOptions options) {
  const std::size_t r = map.target.rank();
  const std::size_t s = map.source.rank();
  if (map.columns.size() != s) throw InvalidInput("syzygies: column count differs from source rank");
  GradedFreeModule big = map.target.direct_sum(map.source);
  Engine engine(ring, big);
  for (const Polynomial& f : options.quotient_ideal)
    for (std::size_t l = 0; l < big.rank(); ++l) {
      ModuleElement e = ModuleElement::zero(big.rank());
      e.components[l] = f;
      engine.add_input(e, -1);
    }
  for (std::size_t k = 0; k < s; ++k) {
    auto deg = element_degree(map.columns[k], map.target);
    if (deg && *deg != map.source.twist(k))
      throw InvalidInput("syzygies: column degree differs from its source twist");
    ModuleElement e = ModuleElement::zero(big.rank());
    for (std::size_t l = 0; l < r; ++l) e.components[l] = map.columns[k].components[l];
    e.components[r + k] = ring.constant(1);
    engine.add_input(e, -1);
  }
  engine.run(options.max_degree);
  std::vector<ModuleElement> syz;
  for (const SparseElement& g : engine.reduced_basis()) {
    if (g.front().component < r) continue;
    SparseElement shifted;
    for (const ModuleTerm& t : g) shifted.push_back({t.component - static_cast<std::uint32_t>(r), t.monomial, t.coefficient});
    syz.push_back(to_module(shifted, s));
  }
  std::vector<ModuleElement> pregens;
  for (const Polynomial& f : options.quotient_ideal)
    for (std::size_t k = 0; k < s; ++k) {
      ModuleElement e = ModuleElement::zero(s);
      e.components[k] = f;
      pregens.push_back(e);
    }
  MinimalGenerators mg = minimal_generators(ring, map.source, pregens, syz, {options.max_degree});
  GradedMap out;
  out.target = map.source;
  std::vector<int> twists;
  for (std::size_t k : mg.indices) {
    twists.push_back(*element_degree(syz[k], map.source));
    out.columns.push_back(syz[k]);
  }
  out.source = GradedFreeModule(std::move(twists));
  return {std::move(out), engine.complete()};
}

void BettiTable::add(int i, int j, std::size_t count) {
  if (count == 0) return;
  entries_[{i, j}] += count;
}

std::size_t BettiTable::at(int i, int j) const {
  auto it = entries_.find({i, j});
  return it == entries_.end() ? 0 : it->second;
}

std::size_t BettiTable::total(int i) const {
  std::size_t s = 0;
  for (const auto& [key, v] : entries_)
    if (key.first == i) s += v;
  return s;
}

int BettiTable::length() const {
  int l = -1;
  for (const auto& [key, v] : entries_) l = std::max(l, key.first);
  return l;
}

std::pair<int, int> BettiTable::degree_range() const {
  if (entries_.empty()) return {0, -1};
  int lo = entries_.begin()->first.second, hi = lo;
  for (const auto& [key, v] : entries_) {
    lo = std::min(lo, key.second);
    hi = std::max(hi, key.second);
  }
  return {lo, hi};
}

BettiTable BettiTable::shifted(int delta) const {
  BettiTable out;
  for (const auto& [key, v] : entries_)
    if (key.first + delta >= 0) out.add(key.first + delta, key.second, v);
  return out;
}

std::string BettiTable::to_text() const {
  std::ostringstream os;
  int len = length();
  if (len < 0) return "total:\n";
  auto [lo, hi] = degree_range();
  std::size_t width = 1;
  for (int i = 0; i <= len; ++i) width = std::max(width, std::to_string(total(i)).size());
  std::size_t label = std::max<std::size_t>(6, std::to_string(hi).size() + 1);
  label = std::max(label, std::to_string(lo).size() + 1);
  auto cell = [&](const std::string& s) {
    os << ' ' << std::string(width - s.size(), ' ') << s;
  };
  os << std::string(label, ' ');
  for (int i = 0; i <= len; ++i) cell(std::to_string(i));
  os << '\n' << std::string(label - 6, ' ') << "total:";
  for (int i = 0; i <= len; ++i) cell(std::to_string(total(i)));
  os << '\n';
  for (int j = lo; j <= hi; ++j) {
    bool any = false;
    for (int i = 0; i <= len; ++i) any = any || at(i, j) != 0;
    if (!any) continue;
    std::string lab = std::to_string(j) + ":";
    os << std::string(label - lab.size(), ' ') << lab;
    for (int i = 0; i <= len; ++i) {
      std::size_t v = at(i, j);
      cell(v ? std::to_string(v) : ".");
    }
    os << '\n';
  }
  return os.str();
}

BettiTable betti_of(const std::vector<GradedFreeModule>& modules) {
  BettiTable t;
  for (std::size_t i = 0; i < modules.size(); ++i)
    for (int e : modules[i].twists()) t.add(static_cast<int>(i), e);
  return t;
}

namespace {

GradedFreeModule erase_twist(const GradedFreeModule& m, std::size_t k) {
  std::vector<int> t = m.twists();
  t.erase(t.begin() + static_cast<std::ptrdiff_t>(k));
  return GradedFreeModule(std::move(t));
}

}  // namespace

void prune_constants(const PolyRing& ring, FreeResolution& res) {
  const PrimeField& f = ring.field();
  auto& ds = res.differentials;
  for (std::size_t i = 0; i < ds.size(); ++i) {
    while (true) {
      GradedMap& d = ds[i];
      std::optional<std::pair<std::size_t, std::size_t>> hit;
      for (std::size_t c = 0; c < d.columns.size() && !hit; ++c)
        for (std::size_t r = 0; r < d.target.rank(); ++r)
          if (d.columns[c].components[r].is_constant()) {
            hit = {r, c};
            break;
          }
      if (!hit) break;
      auto [r, c] = *hit;
      Residue inv = f.inv(d.columns[c].components[r].leading_term().coefficient);
      const ModuleElement pivot = d.columns[c];
      for (std::size_t k = 0; k < d.columns.size(); ++k) {
        if (k == c) continue;
        const Polynomial g = d.columns[k].components[r];
        if (g.is_zero()) continue;
        Polynomial factor = ring.scale(g, inv);
        for (std::size_t l = 0; l < d.target.rank(); ++l)
          d.columns[k].components[l] =
              ring.subtract(d.columns[k].components[l], ring.multiply(factor, pivot.components[l]));
      }
      for (auto& col : d.columns) col.components.erase(col.components.begin() + static_cast<std::ptrdiff_t>(r));
      d.columns.erase(d.columns.begin() + static_cast<std::ptrdiff_t>(c));
      d.target = erase_twist(d.target, r);
      d.source = erase_twist(d.source, c);
      if (i >= 1) {
        GradedMap& below = ds[i - 1];
        below.columns.erase(below.columns.begin() + static_cast<std::ptrdiff_t>(r));
        below.source = d.target;
      }
      if (i + 1 < ds.size()) {
        GradedMap& above = ds[i + 1];
        for (auto& col : above.columns)
          col.components.erase(col.components.begin() + static_cast<std::ptrdiff_t>(c));
        above.target = d.source;
      }
    }
  }
  GradedFreeModule f0 = ds.empty() ? res.modules.front() : ds.front().target;
  while (!ds.empty() && ds.back().source.rank() == 0) ds.pop_back();
  res.modules.assign(1, f0);
  for (const auto& d : ds) res.modules.push_back(d.source);
  res.betti = betti_of(res.modules);
}

FreeResolution minimal_free_resolution(const PolyRing& ring, const GradedModulePresentation& pres,
                                       ResolutionOptions options) {
  const bool over_quotient = !options.quotient_ideal.empty();
  int max_twist = 0;
  if (pres.target.rank()) max_twist = pres.target.max_twist();
  if (pres.source.rank()) max_twist = std::max(max_twist, pres.source.max_twist());
  // Over R the computation terminates without a cap; a quotient needs one.
  std::optional<int> bound = options.max_degree;
  if (!bound && over_quotient) bound = max_twist + ring.n() + 3;
  const int levels = options.max_level.value_or(ring.n() + 2);

  FreeResolution res;
  res.modules.push_back(pres.target);
  std::vector<ModuleElement> pregens;
  for (const Polynomial& f : options.quotient_ideal)
    for (std::size_t l = 0; l < pres.target.rank(); ++l) {
      ModuleElement e = ModuleElement::zero(pres.target.rank());
      e.components[l] = f;
      pregens.push_back(e);
    }
  MinimalGenerators mg = minimal_generators(ring, pres.target, pregens, pres.columns, {bound});
  if (!mg.basis.complete()) {
    if (!over_quotient) throw TruncationExceeded("degree bound too small for the presentation", bound.value_or(-1));
    res.truncated = true;
  }
  GradedMap d1;
  d1.target = pres.target;
  std::vector<int> twists;
  for (std::size_t k : mg.indices) {
    d1.columns.push_back(pres.columns[k]);
    twists.push_back(pres.source.twist(k));
  }
  d1.source = GradedFreeModule(std::move(twists));
  if (d1.source.rank() == 0) {
    res.betti = betti_of(res.modules);
    return res;
  }
  res.differentials.push_back(std::move(d1));
  res.modules.push_back(res.differentials.back().source);
  while (true) {
    if (static_cast<int>(res.differentials.size()) >= levels) {
      if (!over_quotient) throw TruncationExceeded("resolution longer than the homological bound", levels);
      res.truncated = true;
      break;
    }
    SyzygyResult syz = syzygies(ring, res.differentials.back(), {bound, options.quotient_ideal});
    if (!syz.complete) {
      if (!over_quotient) throw TruncationExceeded("degree bound too small for the syzygies", bound.value_or(-1));
      res.truncated = true;
    }
    if (syz.syzygies.source.rank() == 0) break;
    res.differentials.push_back(std::move(syz.syzygies));
    res.modules.push_back(res.differentials.back().source);
  }
  prune_constants(ring, res);
  res.betti = betti_of(res.modules);
  return res;
}

}  // namespace detstrata
