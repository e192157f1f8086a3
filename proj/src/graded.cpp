#include "detstrata/graded.hpp"

#include <algorithm>
#include <map>

#include "detstrata/errors.hpp"

namespace detstrata {

struct GradedQuotient::Impl {
  struct Level {
    std::unique_ptr<DegreePiece> piece;
    std::vector<std::int32_t> position;  // -1 for non-standard ambient indices
    std::vector<std::size_t> standard;   // ambient index of each standard element
    std::vector<Vector> nf;              // normal forms of non-standard indices
  };

  Impl(const PolyRing& r, GradedFreeModule amb, const std::vector<ModuleElement>& relations, int bound)
      : ring(r), ambient(std::move(amb)), max_degree(bound), gb(buchberger(ring, ambient, relations, {bound})) {
    if (ambient.rank() == 0) {
      min_degree = bound + 1;
      top = bound;
      return;
    }
    min_degree = ambient.min_twist();
    for (int d = min_degree; d <= max_degree; ++d) levels.push_back(build(d));
    const int hi = ambient.max_twist();
    std::optional<int> last_nonzero;
    for (int d = min_degree; d <= max_degree; ++d) {
      if (level(d).standard.empty()) {
        if (d >= hi) {
          top = last_nonzero.value_or(min_degree - 1);
          break;
        }
      } else {
        last_nonzero = d;
      }
    }
  }

  Level build(int d) const {
    Level lvl;
    lvl.piece = std::make_unique<DegreePiece>(ring, ambient, d);
    const std::size_t dim = lvl.piece->dimension();
    lvl.position.assign(dim, -1);
    std::vector<std::int32_t> reducer(dim, -1);
    for (std::size_t idx = 0; idx < dim; ++idx) {
      auto [k, m] = lvl.piece->decode(idx);
      if (auto r = gb.reducer(k, *m)) {
        reducer[idx] = static_cast<std::int32_t>(*r);
      } else {
        lvl.position[idx] = static_cast<std::int32_t>(lvl.standard.size());
        lvl.standard.push_back(idx);
      }
    }
    const std::size_t q = lvl.standard.size();
    const PrimeField& f = ring.field();
    lvl.nf.resize(dim);
    // Tail terms of a reducer are smaller, i.e. have larger indices, so a
    // backwards sweep sees them first.
    for (std::size_t idx = dim; idx-- > 0;) {
      if (reducer[idx] < 0 || q == 0) continue;
      auto [k, m] = lvl.piece->decode(idx);
      const SparseElement& g = gb.sparse(static_cast<std::size_t>(reducer[idx]));
      Monomial shift = m->divided_by(g[0].monomial);
      Vector out(q, 0);
      for (std::size_t t = 1; t < g.size(); ++t) {
        std::size_t j = lvl.piece->index(g[t].component, shift * g[t].monomial);
        Residue c = f.neg(g[t].coefficient);
        if (lvl.position[j] >= 0)
          out[lvl.position[j]] = f.add(out[lvl.position[j]], c);
        else if (!lvl.nf[j].empty())
          axpy_sub(f, out, f.neg(c), lvl.nf[j]);
      }
      lvl.nf[idx] = std::move(out);
    }
    return lvl;
  }

  const Level& level(int d) const { return levels[static_cast<std::size_t>(d - min_degree)]; }

  bool vanishes(int d) const { return d < min_degree || (top && d > *top); }

  void check(int d) const {
    if (d > max_degree && !vanishes(d))
      throw TruncationExceeded("quotient tables computed only through degree " + std::to_string(max_degree),
                               max_degree);
  }

  // out += c * (class of ambient index idx in degree d)
  void accumulate(const Level& lvl, Vector& out, std::size_t idx, Residue c) const {
    const PrimeField& f = ring.field();
    if (lvl.position[idx] >= 0)
      out[lvl.position[idx]] = f.add(out[lvl.position[idx]], c);
    else if (!lvl.nf[idx].empty())
      axpy_sub(f, out, f.neg(c), lvl.nf[idx]);
  }

  PolyRing ring;
  GradedFreeModule ambient;
  int max_degree;
  int min_degree = 0;
  GroebnerBasis gb;
  std::vector<Level> levels;
  std::optional<int> top;
};

GradedQuotient::GradedQuotient(const PolyRing& ring, GradedFreeModule ambient,
                               const std::vector<ModuleElement>& relations, int max_degree)
    : impl_(std::make_shared<const Impl>(ring, std::move(ambient), relations, max_degree)) {}

GradedQuotient GradedQuotient::free(const PolyRing& ring, GradedFreeModule ambient, int max_degree) {
  return GradedQuotient(ring, std::move(ambient), {}, max_degree);
}

const PolyRing& GradedQuotient::ring() const noexcept { return impl_->ring; }
const GradedFreeModule& GradedQuotient::ambient() const noexcept { return impl_->ambient; }
int GradedQuotient::max_degree() const noexcept { return impl_->max_degree; }
const GroebnerBasis& GradedQuotient::basis() const noexcept { return impl_->gb; }
std::optional<int> GradedQuotient::top_degree() const { return impl_->top; }

std::size_t GradedQuotient::dimension(int d) const {
  if (impl_->vanishes(d)) return 0;
  impl_->check(d);
  return impl_->level(d).standard.size();
}

std::pair<std::size_t, Monomial> GradedQuotient::standard_monomial(int d, std::size_t pos) const {
  impl_->check(d);
  const auto& lvl = impl_->level(d);
  auto [k, m] = lvl.piece->decode(lvl.standard.at(pos));
  return {k, *m};
}

Vector GradedQuotient::reduce(int d, std::span<const Residue> v) const {
  if (impl_->vanishes(d)) return {};
  impl_->check(d);
  const auto& lvl = impl_->level(d);
  if (v.size() != lvl.piece->dimension()) throw InvalidInput("reduce: wrong ambient dimension");
  Vector out(lvl.standard.size(), 0);
  for (std::size_t idx = 0; idx < v.size(); ++idx)
    if (v[idx]) impl_->accumulate(lvl, out, idx, v[idx]);
  return out;
}

Vector GradedQuotient::normal_form(const ModuleElement& f, int d) const {
  if (impl_->vanishes(d)) return {};
  impl_->check(d);
  const auto& lvl = impl_->level(d);
  Vector out(lvl.standard.size(), 0);
  for (std::size_t k = 0; k < f.components.size(); ++k)
    for (const Term& t : f.components[k].terms()) {
      if (t.monomial.degree() + impl_->ambient.twist(k) != d)
        throw InvalidInput("normal_form: element not of the requested degree");
      impl_->accumulate(lvl, out, lvl.piece->index(k, t.monomial), t.coefficient);
    }
  return out;
}

Vector GradedQuotient::multiply(int d, std::span<const Residue> q, const Monomial& u) const {
  const int e = d + u.degree();
  if (impl_->vanishes(e) || impl_->vanishes(d)) return Vector(dimension(e), 0);
  impl_->check(e);
  const auto& src = impl_->level(d);
  const auto& dst = impl_->level(e);
  Vector out(dst.standard.size(), 0);
  for (std::size_t pos = 0; pos < q.size(); ++pos) {
    if (!q[pos]) continue;
    auto [k, m] = src.piece->decode(src.standard[pos]);
    impl_->accumulate(dst, out, dst.piece->index(k, *m * u), q[pos]);
  }
  return out;
}

Vector GradedQuotient::multiply(int d, std::span<const Residue> q, const Polynomial& f) const {
  if (f.is_zero()) {
    // degree is unknown for zero; callers pass zero only when the result is unused
    return {};
  }
  const int e = d + f.degree();
  Vector out(dimension(e), 0);
  const PrimeField& field = impl_->ring.field();
  for (const Term& t : f.terms()) {
    Vector part = multiply(d, q, t.monomial);
    axpy_sub(field, out, field.neg(t.coefficient), part);
  }
  return out;
}

ModuleElement GradedQuotient::lift(int d, std::span<const Residue> q) const {
  ModuleElement f = ModuleElement::zero(impl_->ambient.rank());
  if (impl_->vanishes(d)) return f;
  impl_->check(d);
  const auto& lvl = impl_->level(d);
  std::vector<std::vector<Term>> comps(impl_->ambient.rank());
  for (std::size_t pos = 0; pos < q.size(); ++pos) {
    if (!q[pos]) continue;
    auto [k, m] = lvl.piece->decode(lvl.standard[pos]);
    comps[k].push_back({*m, q[pos]});
  }
  for (std::size_t k = 0; k < comps.size(); ++k) f.components[k] = Polynomial::from_sorted_terms(std::move(comps[k]));
  return f;
}

Polynomial GradedQuotient::lift_scalar(int d, std::span<const Residue> q) const {
  if (impl_->ambient.rank() != 1) throw InvalidInput("lift_scalar on a module of rank != 1");
  return lift(d, q).components[0];
}

QuotientFreeModule::QuotientFreeModule(GradedQuotient ring, std::vector<int> twists)
    : a_(std::move(ring)), twists_(std::move(twists)) {}

std::size_t QuotientFreeModule::dimension(int d) const { return offset(d, twists_.size()); }

std::size_t QuotientFreeModule::offset(int d, std::size_t k) const {
  std::size_t s = 0;
  for (std::size_t j = 0; j < k; ++j) s += a_.dimension(d - twists_[j]);
  return s;
}

std::size_t QuotientFreeModule::block(int d, std::size_t k) const { return a_.dimension(d - twists_[k]); }

std::span<const Residue> QuotientFreeModule::component(int d, std::span<const Residue> v, std::size_t k) const {
  return v.subspan(offset(d, k), block(d, k));
}

Vector QuotientFreeModule::multiply(int d, std::span<const Residue> v, const Monomial& u) const {
  const int e = d + u.degree();
  Vector out;
  out.reserve(dimension(e));
  std::size_t off = 0;
  for (std::size_t k = 0; k < twists_.size(); ++k) {
    std::size_t len = a_.dimension(d - twists_[k]);
    Vector part = a_.multiply(d - twists_[k], v.subspan(off, len), u);
    part.resize(a_.dimension(e - twists_[k]), 0);
    out.insert(out.end(), part.begin(), part.end());
    off += len;
  }
  return out;
}

LinearResolution::LinearResolution(GradedQuotient ring, std::vector<int> q0_twists,
                                   const std::vector<std::pair<int, Vector>>& relations, int max_level,
                                   int max_degree)
    : a_(std::move(ring)), max_degree_(max_degree), levels_(static_cast<std::size_t>(max_level) + 1) {
  if (a_.ambient().rank() != 1) throw InvalidInput("LinearResolution needs a rank-one base ring");
  levels_[0].degrees = std::move(q0_twists);
  if (levels_[0].degrees.empty()) return;
  const PrimeField& field = a_.ring().field();
  const std::size_t nv = a_.ring().num_variables();
  int dmin = *std::min_element(levels_[0].degrees.begin(), levels_[0].degrees.end());
  for (const auto& [deg, vec] : relations) dmin = std::min(dmin, deg);

  // kernel bases of the previous and current degree, per level
  std::vector<std::vector<Vector>> prev(levels_.size()), cur(levels_.size());
  for (int d = dmin; d <= max_degree; ++d) {
    // level 1: minimal generators of the relation module
    {
      QuotientFreeModule q0 = module(0);
      EchelonBasis span(field, q0.dimension(d));
      for (const Vector& v : prev[0])
        for (std::size_t x = 0; x < nv; ++x) span.insert(q0.multiply(d - 1, v, Monomial::variable(x)));
      for (const auto& [deg, vec] : relations) {
        if (deg != d) continue;
        if (vec.size() != span.ambient_dimension()) throw InvalidInput("relation has the wrong dimension");
        if (span.insert(vec) && max_level >= 1) {
          levels_[1].degrees.push_back(d);
          levels_[1].images.push_back(vec);
        }
      }
      cur[0].clear();
      for (std::size_t k = 0; k < span.rank(); ++k) cur[0].push_back(span.basis_vector(k));
    }
    for (std::size_t i = 2; i < levels_.size(); ++i) {
      QuotientFreeModule src = module(i - 1);
      QuotientFreeModule dst = module(i - 2);
      const std::size_t cols = src.dimension(d);
      cur[i - 1].clear();
      if (cols == 0) continue;
      ExactMatrix m(field, dst.dimension(d), cols);
      std::size_t col = 0;
      const Level& lv = levels_[i - 1];
      for (std::size_t g = 0; g < lv.degrees.size(); ++g) {
        const int e = lv.degrees[g];
        const std::size_t len = a_.dimension(d - e);
        for (std::size_t s = 0; s < len; ++s, ++col) {
          Monomial u = a_.standard_monomial(d - e, s).second;
          Vector img = dst.multiply(e, lv.images[g], u);
          for (std::size_t r = 0; r < img.size(); ++r) m.set(r, col, img[r]);
        }
      }
      std::vector<Vector> kernel = kernel_basis(m);
      EchelonBasis span(field, cols);
      for (const Vector& v : prev[i - 1])
        for (std::size_t x = 0; x < nv; ++x) span.insert(src.multiply(d - 1, v, Monomial::variable(x)));
      for (const Vector& w : kernel) {
        if (span.insert(w)) {
          levels_[i].degrees.push_back(d);
          levels_[i].images.push_back(w);
        }
      }
      cur[i - 1] = std::move(kernel);
    }
    std::swap(prev, cur);
  }
}

BettiTable LinearResolution::betti() const {
  BettiTable t;
  for (std::size_t i = 0; i < levels_.size(); ++i)
    for (int e : levels_[i].degrees) t.add(static_cast<int>(i), e);
  return t;
}

ExactMatrix hom_differential(const LinearResolution& res, const GradedQuotient& p, std::size_t i) {
  if (i + 1 >= res.levels()) throw TruncationExceeded("resolution too short for this Hom differential");
  const PrimeField& field = p.ring().field();
  const auto& src = res.level(i);
  const auto& dst = res.level(i + 1);
  std::vector<std::size_t> src_off{0}, dst_off{0};
  for (int e : src.degrees) src_off.push_back(src_off.back() + p.dimension(e));
  for (int e : dst.degrees) dst_off.push_back(dst_off.back() + p.dimension(e));
  ExactMatrix m(field, dst_off.back(), src_off.back());
  QuotientFreeModule qi = res.module(i);
  const GradedQuotient& a = res.base();
  for (std::size_t l = 0; l < dst.degrees.size(); ++l) {
    const int el = dst.degrees[l];
    if (p.dimension(el) == 0) continue;
    for (std::size_t k = 0; k < src.degrees.size(); ++k) {
      const int ek = src.degrees[k];
      const std::size_t pk = p.dimension(ek);
      if (pk == 0) continue;
      auto coeff = qi.component(el, dst.images[l], k);
      for (std::size_t s = 0; s < coeff.size(); ++s) {
        if (!coeff[s]) continue;
        Monomial u = a.standard_monomial(el - ek, s).second;
        for (std::size_t b = 0; b < pk; ++b) {
          Vector unit(pk, 0);
          unit[b] = 1;
          Vector img = p.multiply(ek, unit, u);
          for (std::size_t r = 0; r < img.size(); ++r)
            if (img[r]) {
              std::size_t row = dst_off[l] + r, c = src_off[k] + b;
              m.set(row, c, field.add(m.at(row, c), field.mul(coeff[s], img[r])));
            }
        }
      }
    }
  }
  return m;
}

ExtResult ext_degree_zero(const LinearResolution& res, const GradedQuotient& p, std::size_t i) {
  ExtResult out;
  std::size_t hom = 0;
  for (int e : res.level(i).degrees) hom += p.dimension(e);
  std::size_t r_out = rank(hom_differential(res, p, i));
  std::size_t r_in = i == 0 ? 0 : rank(hom_differential(res, p, i - 1));
  out.dimension = hom - r_out - r_in;
  auto top = p.top_degree();
  out.truncated = !(top && res.max_degree() >= *top);
  return out;
}

std::vector<Vector> hom_degree_zero(const GradedModulePresentation& pres, const GradedQuotient& p) {
  const PrimeField& field = p.ring().field();
  std::vector<std::size_t> src_off{0}, dst_off{0};
  for (int e : pres.target.twists()) src_off.push_back(src_off.back() + p.dimension(e));
  for (int f : pres.source.twists()) dst_off.push_back(dst_off.back() + p.dimension(f));
  ExactMatrix m(field, dst_off.back(), src_off.back());
  for (std::size_t l = 0; l < pres.columns.size(); ++l) {
    const int fl = pres.source.twist(l);
    if (p.dimension(fl) == 0) continue;
    for (std::size_t k = 0; k < pres.target.rank(); ++k) {
      const Polynomial& entry = pres.columns[l].components[k];
      const int ek = pres.target.twist(k);
      const std::size_t pk = p.dimension(ek);
      if (entry.is_zero() || pk == 0) continue;
      for (std::size_t b = 0; b < pk; ++b) {
        Vector unit(pk, 0);
        unit[b] = 1;
        Vector img = p.multiply(ek, unit, entry);
        for (std::size_t r = 0; r < img.size(); ++r)
          if (img[r]) m.set(dst_off[l] + r, src_off[k] + b, field.add(m.at(dst_off[l] + r, src_off[k] + b), img[r]));
      }
    }
  }
  return kernel_basis(m);
}

}  // namespace detstrata
