#include "detstrata/homext.hpp"

#include <algorithm>

#include "detstrata/errors.hpp"

namespace detstrata {

namespace {

std::size_t span_rank(const PrimeField& field, std::size_t dim, const std::vector<Vector>& vs) {
  EchelonBasis span(field, dim);
  for (const Vector& v : vs) span.insert(v);
  return span.rank();
}

// tr(adj(phi_J*) eta_J): Σ_{r, p} (-1)^{r+p} eta[r][J_p] det(phi* without row r, column J_p).
Polynomial trace_for(const GradedMatrix& m, const EtaMatrix& eta, const std::vector<std::size_t>& J) {
  const PolyRing& r = m.ring();
  const std::size_t t = m.rows();
  Polynomial acc;
  for (std::size_t row = 0; row < t; ++row) {
    std::vector<std::size_t> rows;
    for (std::size_t k = 0; k < t; ++k)
      if (k != row) rows.push_back(k);
    for (std::size_t p = 0; p < J.size(); ++p) {
      const Polynomial& e = eta.at(row).at(J[p]);
      if (e.is_zero()) continue;
      std::vector<std::size_t> cols;
      for (std::size_t q = 0; q < J.size(); ++q)
        if (q != p) cols.push_back(J[q]);
      Polynomial term = r.multiply(e, m.minor(rows, cols));
      acc = (row + p) % 2 == 0 ? r.add(acc, term) : r.subtract(acc, term);
    }
  }
  return acc;
}

template <typename Cache, typename Make>
const GradedQuotient& cached(Cache& cache, int bound, Make make) {
  auto it = cache.lower_bound(bound);
  if (it != cache.end()) return it->second;
  return cache.emplace(bound, make()).first->second;
}

}  // namespace

std::vector<Polynomial> trace_of_adjoint(const GradedMatrix& m, const EtaMatrix& eta) {
  std::vector<Polynomial> out;
  for (const auto& J : m.maximal_minor_columns()) out.push_back(trace_for(m, eta, J));
  return out;
}

HomExtContext::HomExtContext(GradedMatrix m, HomExtOptions options) : m_(std::move(m)), options_(options) {
  const auto all = m_.maximal_minors();
  const auto cols = m_.maximal_minor_columns();
  for (std::size_t k = 0; k < all.size(); ++k) {
    if (all[k].is_zero()) {
      zero_minor_columns_.push_back(cols[k]);
      continue;
    }
    minors_.push_back(all[k]);
    minor_degrees_.push_back(all[k].degree());
    minor_columns_.push_back(cols[k]);
  }
  if (minors_.empty()) throw NotStandard("every maximal minor vanishes");
  const PolyRing& r = m_.ring();
  GradedMap gens;
  gens.source = GradedFreeModule(minor_degrees_);
  gens.target = GradedFreeModule({0});
  for (const Polynomial& f : minors_) gens.columns.push_back(ModuleElement({f}));
  SyzygyResult syz = syzygies(r, gens);
  ideal_pres_ = GradedModulePresentation{syz.syzygies.source, gens.source, syz.syzygies.columns};
  const int dmax = *std::max_element(minor_degrees_.begin(), minor_degrees_.end());
  syz_top_ = dmax;
  if (ideal_pres_.source.rank()) syz_top_ = std::max(syz_top_, ideal_pres_.source.max_twist());
  bound_ = options_.degree_bound.value_or(dmax + r.n() + 3);
}

const GradedQuotient& HomExtContext::A(int bound) {
  return cached(a_cache_, bound, [&] {
    std::vector<ModuleElement> gens;
    for (const Polynomial& f : minors_) gens.push_back(ModuleElement({f}));
    return GradedQuotient(m_.ring(), GradedFreeModule({0}), gens, bound);
  });
}

const GradedQuotient& HomExtContext::M(int bound) {
  return cached(m_cache_, bound, [&] {
    GradedModulePresentation pres = m_.presentation();
    return GradedQuotient(m_.ring(), pres.target, pres.columns, bound);
  });
}

const GradedQuotient& HomExtContext::N(int bound) {
  return cached(n_cache_, bound, [&] {
    const std::size_t t = m_.rows();
    const auto& b = m_.spec().b;
    std::vector<int> twists;
    for (std::size_t i = 0; i < t; ++i)
      for (std::size_t k = 0; k < t; ++k) twists.push_back(b[k] - b[i]);
    std::vector<ModuleElement> rels;
    for (std::size_t i = 0; i < t; ++i)
      for (std::size_t j = 0; j < m_.cols(); ++j) {
        ModuleElement e = ModuleElement::zero(t * t);
        for (std::size_t k = 0; k < t; ++k) e.components[i * t + k] = m_.entry(k, j);
        rels.push_back(std::move(e));
      }
    return GradedQuotient(m_.ring(), GradedFreeModule(twists), rels, bound);
  });
}

const Ext1R& HomExtContext::ext1_R_MM() {
  if (ext1_R_) return *ext1_R_;
  const auto& b = m_.spec().b;
  const auto& a = m_.spec().a;
  const PolyRing& r = m_.ring();
  const std::size_t t = m_.rows();
  const GradedQuotient& mq = M(std::max(a.back(), b.back()));
  std::vector<std::size_t> f_off{0}, g_off{0};
  for (int bi : b) f_off.push_back(f_off.back() + mq.dimension(bi));
  for (int aj : a) g_off.push_back(g_off.back() + mq.dimension(aj));

  // 0Hom(F*,M) -> 0Hom(G*,M): (m_i) -> (Σ_i f_ij m_i)_j
  std::vector<Vector> columns;
  for (std::size_t i = 0; i < t; ++i)
    for (std::size_t s = 0; s < mq.dimension(b[i]); ++s) {
      Vector unit(mq.dimension(b[i]), 0);
      unit[s] = 1;
      ModuleElement u = mq.lift(b[i], unit);
      Vector col;
      col.reserve(g_off.back());
      for (std::size_t j = 0; j < a.size(); ++j) {
        ModuleElement v = ModuleElement::zero(t);
        for (std::size_t k = 0; k < t; ++k) v.components[k] = r.multiply(u.components[k], m_.entry(i, j));
        Vector img = mq.normal_form(v, a[j]);
        img.resize(mq.dimension(a[j]), 0);
        col.insert(col.end(), img.begin(), img.end());
      }
      columns.push_back(std::move(col));
    }

  Ext1R out;
  out.hom_F_M = f_off.back();
  out.hom_G_M = g_off.back();
  EchelonBasis span(r.field(), g_off.back());
  for (const Vector& c : columns) span.insert(c);
  out.rank = span.rank();
  out.dimension = out.hom_G_M - out.rank;
  out.hom_M_M = out.hom_F_M - out.rank;
  for (std::size_t j = 0; j < a.size(); ++j)
    for (std::size_t s = 0; s < g_off[j + 1] - g_off[j]; ++s) {
      Vector unit(g_off.back(), 0);
      unit[g_off[j] + s] = 1;
      if (!span.insert(unit)) continue;
      Vector local(mq.dimension(a[j]), 0);
      local[s] = 1;
      ModuleElement lift = mq.lift(a[j], local);
      EtaMatrix eta(t, std::vector<Polynomial>(a.size()));
      for (std::size_t i = 0; i < t; ++i) eta[i][j] = lift.components[i];
      out.cocycles.push_back(std::move(eta));
    }
  ext1_R_ = std::move(out);
  return *ext1_R_;
}

std::size_t HomExtContext::hom_A_MM() { return ext1_R_MM().hom_M_M; }

ExactMatrix HomExtContext::tangent_map_eM(const std::vector<EtaMatrix>& etas) {
  const PolyRing& r = m_.ring();
  const GradedQuotient& aq = A(syz_top_);
  std::vector<std::size_t> off{0};
  for (int d : minor_degrees_) off.push_back(off.back() + aq.dimension(d));
  ExactMatrix out(r.field(), off.back(), etas.size());
  for (std::size_t col = 0; col < etas.size(); ++col) {
    const EtaMatrix& eta = etas[col];
    for (const auto& J : zero_minor_columns_) {
      Polynomial g = trace_for(m_, eta, J);
      if (g.is_zero()) continue;
      Vector v = aq.normal_form(ModuleElement({g}), g.degree());
      if (std::any_of(v.begin(), v.end(), [](Residue x) { return x != 0; }))
        throw SyzygyIncompatible("a vanishing maximal minor has a derivative outside I");
    }
    std::vector<Polynomial> g;
    for (std::size_t k = 0; k < minor_columns_.size(); ++k) {
      g.push_back(trace_for(m_, eta, minor_columns_[k]));
      Vector v = aq.normal_form(ModuleElement({g.back()}), minor_degrees_[k]);
      for (std::size_t s = 0; s < v.size(); ++s) out.set(off[k] + s, col, v[s]);
    }
    for (std::size_t l = 0; l < ideal_pres_.columns.size(); ++l) {
      Polynomial acc;
      for (std::size_t k = 0; k < g.size(); ++k)
        acc = r.add(acc, r.multiply(ideal_pres_.columns[l].components[k], g[k]));
      if (acc.is_zero()) continue;
      Vector v = aq.normal_form(ModuleElement({acc}), ideal_pres_.source.twist(l));
      if (std::any_of(v.begin(), v.end(), [](Residue x) { return x != 0; }))
        throw SyzygyIncompatible("trace images violate a syzygy of I");
    }
  }
  return out;
}

const std::vector<Vector>& HomExtContext::hom_I_A_basis() {
  if (!hom_I_A_) hom_I_A_ = hom_degree_zero(ideal_pres_, A(syz_top_));
  return *hom_I_A_;
}

std::size_t HomExtContext::hom_I_A() { return hom_I_A_basis().size(); }

Vector HomExtContext::identity_times(std::span<const Residue> g) {
  const std::size_t t = m_.rows();
  const GradedQuotient& aq = A(syz_top_);
  const GradedQuotient& nq = N(syz_top_);
  Vector out;
  std::size_t off = 0;
  for (int d : minor_degrees_) {
    const std::size_t len = aq.dimension(d);
    Polynomial f = aq.lift_scalar(d, g.subspan(off, len));
    off += len;
    ModuleElement e = ModuleElement::zero(t * t);
    for (std::size_t i = 0; i < t; ++i) e.components[i * t + i] = f;
    Vector v = nq.normal_form(e, d);
    v.resize(nq.dimension(d), 0);
    out.insert(out.end(), v.begin(), v.end());
  }
  return out;
}

const FiveTermDegreeZero& HomExtContext::five_term() {
  if (five_) return *five_;
  const PolyRing& r = m_.ring();
  const std::size_t t = m_.rows();
  const auto& a = m_.spec().a;
  FiveTermDegreeZero ft;
  const Ext1R& e1 = ext1_R_MM();
  ft.hom_A_MM = e1.hom_M_M;
  ft.ext1_R = e1.dimension;
  ExactMatrix tm = tangent_map_eM(e1.cocycles);
  ft.rank_eM = rank(tm);
  ft.hom_I_A = hom_I_A();

  const GradedQuotient& nq = N(syz_top_);
  std::size_t n_total = 0;
  for (int d : minor_degrees_) n_total += nq.dimension(d);

  // E2 = {psi in 0Hom(I,N) : each psi(f_J) is an endomorphism of M}
  const int dmax = *std::max_element(minor_degrees_.begin(), minor_degrees_.end());
  const GradedQuotient& mq = M(a.back() + dmax);
  std::vector<Vector> hom_I_N = hom_degree_zero(ideal_pres_, nq);
  std::vector<Vector> defects;
  std::size_t defect_dim = 0;
  for (const Vector& v : hom_I_N) {
    Vector out;
    std::size_t off = 0;
    for (int d : minor_degrees_) {
      const std::size_t len = nq.dimension(d);
      ModuleElement le = nq.lift(d, std::span<const Residue>(v).subspan(off, len));
      off += len;
      for (std::size_t j = 0; j < a.size(); ++j) {
        ModuleElement acc = ModuleElement::zero(t);
        for (std::size_t i = 0; i < t; ++i)
          for (std::size_t k = 0; k < t; ++k)
            acc.components[k] = r.add(acc.components[k], r.multiply(m_.entry(i, j), le.components[i * t + k]));
        Vector img = mq.normal_form(acc, a[j] + d);
        img.resize(mq.dimension(a[j] + d), 0);
        out.insert(out.end(), img.begin(), img.end());
      }
    }
    defect_dim = out.size();
    defects.push_back(std::move(out));
  }
  ft.dim_E2 = hom_I_N.size() - span_rank(r.field(), defect_dim, defects);

  std::vector<Vector> delta, incl;
  for (std::size_t c = 0; c < tm.cols(); ++c) {
    Vector g(tm.rows());
    for (std::size_t s = 0; s < tm.rows(); ++s) g[s] = tm.at(s, c);
    delta.push_back(identity_times(g));
  }
  for (const Vector& h : hom_I_A_basis()) incl.push_back(identity_times(h));
  ft.rank_delta0 = span_rank(r.field(), n_total, delta);
  ft.rank_i = span_rank(r.field(), n_total, incl);
  ft.ext1_A = ft.ext1_R - ft.rank_delta0;
  ft.ker_ext2 = ft.dim_E2 - ft.rank_delta0;
  ft.delta0_injective = ft.rank_delta0 == ft.ext1_R;
  ft.delta0_surjective = ft.rank_delta0 == ft.dim_E2;
  ft.i_is_iso = ft.rank_i == ft.hom_I_A && ft.rank_i == ft.dim_E2;
  ft.first_inclusion_strict = !(ft.rank_eM == ft.ext1_R && ft.rank_eM == ft.hom_I_A);
  ft.second_inclusion_strict = !ft.i_is_iso;
  five_ = ft;
  return *five_;
}

std::optional<int> HomExtContext::certified_span(const GradedModulePresentation& pres, std::size_t levels) {
  const PolyRing& r = m_.ring();
  std::vector<ModuleElement> pregens;
  for (const Polynomial& f : minors_)
    for (std::size_t l = 0; l < pres.target.rank(); ++l) {
      ModuleElement e = ModuleElement::zero(pres.target.rank());
      e.components[l] = f;
      pregens.push_back(e);
    }
  MinimalGenerators mg = minimal_generators(r, pres.target, pregens, pres.columns, {bound_});
  if (!mg.basis.complete()) return std::nullopt;
  int top = pres.target.max_twist();
  GradedMap d;
  d.target = pres.target;
  std::vector<int> twists;
  for (std::size_t k : mg.indices) {
    d.columns.push_back(pres.columns[k]);
    twists.push_back(pres.source.twist(k));
    top = std::max(top, twists.back());
  }
  d.source = GradedFreeModule(std::move(twists));
  for (std::size_t lvl = 2; lvl <= levels && d.source.rank(); ++lvl) {
    SyzygyResult syz = syzygies(r, d, {bound_, minors_});
    if (!syz.complete) return std::nullopt;
    if (syz.syzygies.source.rank()) top = std::max(top, syz.syzygies.source.max_twist());
    d = std::move(syz.syzygies);
  }
  return top;
}

std::vector<ExtValue> HomExtContext::ext_over_A(const GradedModulePresentation& pres, const GradedQuotient& p,
                                                std::size_t imax) {
  const std::size_t levels = imax + 1;
  if (static_cast<int>(levels) > options_.max_level)
    throw TruncationExceeded("homological bound too small", options_.max_level);
  const std::vector<int>& q0 = pres.target.twists();
  const int qmin = pres.target.min_twist();
  int D = bound_;
  std::string method = "truncated";
  if (auto top = p.top_degree()) {
    D = std::max(*top, qmin);
    method = "artinian";
  } else if (auto span = certified_span(pres, levels)) {
    D = *span;
    method = "certified";
  }
  const GradedQuotient& aq = A(D - qmin + 1);
  std::vector<std::pair<int, Vector>> rels;
  for (std::size_t l = 0; l < pres.columns.size(); ++l) {
    const int deg = pres.source.twist(l);
    if (deg > D) continue;
    Vector v;
    for (std::size_t k = 0; k < q0.size(); ++k) {
      Vector part = aq.normal_form(ModuleElement({pres.columns[l].components[k]}), deg - q0[k]);
      part.resize(aq.dimension(deg - q0[k]), 0);
      v.insert(v.end(), part.begin(), part.end());
    }
    rels.emplace_back(deg, std::move(v));
  }
  LinearResolution res(aq, q0, rels, static_cast<int>(levels), D);
  std::vector<ExtValue> out;
  for (std::size_t i = 0; i <= imax; ++i) {
    ExtValue e;
    e.dimension = ext_degree_zero(res, p, i).dimension;
    e.exact = method != "truncated";
    e.degree_bound = D;
    e.max_level = static_cast<int>(levels);
    e.method = method;
    out.push_back(e);
  }
  return out;
}

ExtValue HomExtContext::ext_A_MM(std::size_t i) {
  return ext_over_A(m_.presentation(), M(bound_), i).at(i);
}

ConormalExt HomExtContext::ext1_A_conormal() {
  auto v = ext_over_A(ideal_pres_, A(bound_), 1);
  return {v[0], v[1]};
}

std::size_t hom_A_MM(const GradedMatrix& m) { return HomExtContext(m).hom_A_MM(); }
Ext1R ext1_R_MM(const GradedMatrix& m) { return HomExtContext(m).ext1_R_MM(); }
std::size_t hom_I_A(const GradedMatrix& m) { return HomExtContext(m).hom_I_A(); }
FiveTermDegreeZero five_term_degree_zero(const GradedMatrix& m, HomExtOptions options) {
  return HomExtContext(m, options).five_term();
}
ExtValue ext_A_MM_truncated(const GradedMatrix& m, std::size_t i, HomExtOptions options) {
  return HomExtContext(m, options).ext_A_MM(i);
}
ConormalExt ext1_A_conormal(const GradedMatrix& m, HomExtOptions options) {
  HomExtContext ctx(m, options);
  return ctx.ext1_A_conormal();
}

}  // namespace detstrata
