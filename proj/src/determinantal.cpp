#include "detstrata/determinantal.hpp"

#include <algorithm>
#include <sstream>
#include <unordered_map>

#include "detstrata/combinatorics.hpp"
#include "detstrata/errors.hpp"

namespace detstrata {

namespace {

std::string join(const std::vector<int>& v) {
  std::string s;
  for (std::size_t i = 0; i < v.size(); ++i) s += (i ? "," : "") + std::to_string(v[i]);
  return s;
}

int codim_of(const PolyRing& ring, const std::vector<Polynomial>& gens) {
  std::vector<ModuleElement> elems;
  for (const auto& g : gens)
    if (!g.is_zero()) elems.push_back(ModuleElement({g}));
  const int krull = krull_dimension(buchberger(ring, GradedFreeModule({0}), elems));
  return ring.n() + 1 - krull;  // n+2 for the unit ideal
}

}  // namespace

void DegreeMatrixSpec::validate() const {
  if (b.size() < 2) throw InvalidInput("degree matrix needs t >= 2 rows");
  if (c() < 2) throw InvalidInput("degree matrix needs c >= 2 (at least t+1 columns)");
  if (!std::is_sorted(b.begin(), b.end())) throw InvalidInput("b must be ascending");
  if (!std::is_sorted(a.begin(), a.end())) throw InvalidInput("a must be ascending");
  if (n < 0 || static_cast<std::size_t>(n) + 1 > kMaxVariables)
    throw InvalidInput("n out of range (0.." + std::to_string(kMaxVariables - 1) + ")");
  if (c() > n + 1) throw InvalidInput("codimension c exceeds n+1; the quotient would be zero");
  if (!is_prime(p)) throw InvalidInput("p is not prime");
  if (!explicit_entries.empty()) {
    if (explicit_entries.size() != t()) throw InvalidInput("explicit entries: wrong number of rows");
    for (const auto& row : explicit_entries)
      if (!row.empty() && row.size() != columns()) throw InvalidInput("explicit entries: wrong number of columns");
  }
}

PolyRing DegreeMatrixSpec::ring() const { return PolyRing(static_cast<std::size_t>(n) + 1, PrimeField(p)); }

std::string DegreeMatrixSpec::to_text() const {
  return "(" + join(b) + ";" + join(a) + ") n=" + std::to_string(n);
}

GradedMatrix::GradedMatrix(DegreeMatrixSpec spec, const PolyRing& ring, std::vector<std::vector<Polynomial>> entries)
    : spec_(std::move(spec)), ring_(ring), entries_(std::move(entries)) {
  if (entries_.size() != spec_.t()) throw InvalidInput("matrix has the wrong number of rows");
  for (std::size_t i = 0; i < entries_.size(); ++i) {
    if (entries_[i].size() != spec_.columns()) throw InvalidInput("matrix has the wrong number of columns");
    for (std::size_t j = 0; j < entries_[i].size(); ++j) {
      const Polynomial& f = entries_[i][j];
      if (f.is_zero()) continue;
      if (!f.is_homogeneous() || f.degree() != spec_.degree(i, j))
        throw InvalidInput("entry (" + std::to_string(i) + "," + std::to_string(j) + ") must be homogeneous of degree " +
                           std::to_string(spec_.degree(i, j)));
    }
  }
}

GradedModulePresentation GradedMatrix::presentation() const {
  GradedModulePresentation p{GradedFreeModule(spec_.a), GradedFreeModule(spec_.b), {}};
  for (std::size_t j = 0; j < cols(); ++j) {
    ModuleElement col = ModuleElement::zero(rows());
    for (std::size_t i = 0; i < rows(); ++i) col.components[i] = entries_[i][j];
    p.columns.push_back(std::move(col));
  }
  return p;
}

GradedModulePresentation GradedMatrix::transpose_presentation() const {
  std::vector<int> src, dst;
  for (int bi : spec_.b) src.push_back(-bi);
  for (int aj : spec_.a) dst.push_back(-aj);
  GradedModulePresentation p{GradedFreeModule(src), GradedFreeModule(dst), {}};
  for (std::size_t i = 0; i < rows(); ++i) p.columns.push_back(ModuleElement(entries_[i]));
  return p;
}

GradedMatrix GradedMatrix::first_columns(std::size_t k) const {
  if (k > cols()) throw InvalidInput("first_columns: too many columns");
  DegreeMatrixSpec s = spec_;
  s.a.resize(k);
  for (auto& row : s.explicit_entries)
    if (!row.empty()) row.resize(k);
  std::vector<std::vector<Polynomial>> e = entries_;
  for (auto& row : e) row.resize(k);
  return GradedMatrix(std::move(s), ring_, std::move(e));
}

Polynomial GradedMatrix::minor(const std::vector<std::size_t>& rs, const std::vector<std::size_t>& cs) const {
  if (rs.size() != cs.size()) throw InvalidInput("minor of a non-square selection");
  if (cs.size() > 32 || rs.size() > 32) throw InvalidInput("minor: selection too large");
  // Laplace expansion along the first remaining row, memoized on (row mask, column mask).
  std::unordered_map<std::uint64_t, Polynomial> memo;
  auto rec = [&](auto&& self, std::uint32_t rmask, std::uint32_t cmask) -> Polynomial {
    if (rmask == 0) return ring_.constant(1);
    const std::uint64_t key = (static_cast<std::uint64_t>(rmask) << 32) | cmask;
    if (auto it = memo.find(key); it != memo.end()) return it->second;
    const int r = __builtin_ctz(rmask);
    Polynomial acc;
    int sign_pos = 0;
    for (std::uint32_t m = cmask; m; m &= m - 1) {
      const int c = __builtin_ctz(m);
      const Polynomial& f = entries_[rs[r]][cs[c]];
      if (!f.is_zero()) {
        Polynomial sub = self(self, rmask & ~(1u << r), cmask & ~(1u << c));
        Polynomial term = ring_.multiply(f, sub);
        acc = (sign_pos % 2 == 0) ? ring_.add(acc, term) : ring_.subtract(acc, term);
      }
      ++sign_pos;
    }
    memo.emplace(key, acc);
    return acc;
  };
  const std::uint32_t full_r = rs.size() == 32 ? ~0u : (1u << rs.size()) - 1;
  const std::uint32_t full_c = cs.size() == 32 ? ~0u : (1u << cs.size()) - 1;
  return rec(rec, full_r, full_c);
}

std::vector<Polynomial> GradedMatrix::minors(std::size_t k) const {
  std::vector<Polynomial> out;
  for_each_subset(rows(), k, [&](const std::vector<std::size_t>& rs) {
    for_each_subset(cols(), k, [&](const std::vector<std::size_t>& cs) { out.push_back(minor(rs, cs)); });
  });
  return out;
}

std::vector<std::vector<std::size_t>> GradedMatrix::maximal_minor_columns() const {
  std::vector<std::vector<std::size_t>> out;
  for_each_subset(cols(), rows(), [&](const std::vector<std::size_t>& cs) { out.push_back(cs); });
  return out;
}

std::vector<Polynomial> GradedMatrix::maximal_minors() const { return minors(rows()); }

int GradedMatrix::maximal_minor_degree(const std::vector<std::size_t>& cs) const {
  int d = 0;
  for (std::size_t j : cs) d += spec_.a.at(j);
  for (int bi : spec_.b) d -= bi;
  return d;
}

std::string GradedMatrix::to_text() const {
  std::ostringstream os;
  for (const auto& row : entries_) {
    os << "[";
    for (std::size_t j = 0; j < row.size(); ++j) os << (j ? ", " : "") << ring_.format(row[j]);
    os << "]\n";
  }
  return os.str();
}

GradedMatrix sample_matrix(const DegreeMatrixSpec& spec) {
  spec.validate();
  PolyRing ring = spec.ring();
  Rng rng(spec.seed);
  std::vector<std::vector<Polynomial>> e(spec.t(), std::vector<Polynomial>(spec.columns()));
  for (std::size_t i = 0; i < spec.t(); ++i)
    for (std::size_t j = 0; j < spec.columns(); ++j) {
      const bool has_text = !spec.explicit_entries.empty() && !spec.explicit_entries[i].empty() &&
                            spec.explicit_entries[i][j].has_value();
      if (has_text) {
        e[i][j] = ring.parse(*spec.explicit_entries[i][j]);
        continue;
      }
      const int d = spec.degree(i, j);
      if (d > 0 || (d == 0 && spec.allow_constants)) e[i][j] = ring.random_homogeneous(d, rng);
    }
  return GradedMatrix(spec, ring, std::move(e));
}

const char* to_string(Goodness g) {
  switch (g) {
    case Goodness::good:
      return "good";
    case Goodness::not_good:
      return "not_good";
    case Goodness::vacuous:
      return "vacuous";
  }
  return "?";
}

CodimensionReport codimension_check(const GradedMatrix& m) {
  CodimensionReport r;
  const int c = m.spec().c();
  const int n = m.ring().n();
  r.codim_maximal = codim_of(m.ring(), m.maximal_minors());
  r.codim_submaximal = codim_of(m.ring(), m.minors(m.rows() - 1));
  r.standard = r.codim_maximal == c;
  r.artinian = r.standard && c == n + 1;
  if (!r.standard)
    r.good = Goodness::not_good;
  else if (c + 1 > n + 1)
    // only the unit ideal has codimension above n+1
    r.good = r.codim_submaximal == n + 2 ? Goodness::good : Goodness::vacuous;
  else
    r.good = r.codim_submaximal >= c + 1 ? Goodness::good : Goodness::not_good;
  return r;
}

StandardSample sample_standard(const DegreeMatrixSpec& spec, int max_tries) {
  DegreeMatrixSpec s = spec;
  std::vector<std::uint64_t> tried;
  for (int k = 0;; ++k) {
    s.seed = spec.seed + static_cast<std::uint64_t>(k);
    tried.push_back(s.seed);
    GradedMatrix m = sample_matrix(s);
    CodimensionReport cr = codimension_check(m);
    if (cr.standard || k + 1 >= max_tries) return StandardSample{std::move(m), cr, tried};
  }
}

std::vector<FlagStep> build_flag(const GradedMatrix& m) {
  std::vector<FlagStep> out;
  const int c = m.spec().c();
  for (int i = 2; i <= c; ++i) {
    GradedMatrix mi = m.first_columns(m.rows() + static_cast<std::size_t>(i) - 1);
    std::vector<Polynomial> ideal = mi.maximal_minors();
    if (codim_of(m.ring(), ideal) != i)
      throw NotStandard("the maximal minors of the first " + std::to_string(mi.cols()) +
                        " columns do not have codimension " + std::to_string(i));
    out.push_back(FlagStep{static_cast<std::size_t>(i), mi, std::move(ideal), mi.presentation(),
                           mi.transpose_presentation()});
  }
  return out;
}

std::size_t cokernel_dimension(const PolyRing& ring, const GradedModulePresentation& pres, int d) {
  DegreePiece target(ring, pres.target, d);
  const std::size_t dim = target.dimension();
  if (dim == 0) return 0;
  std::size_t ncols = 0;
  for (std::size_t k = 0; k < pres.columns.size(); ++k) ncols += ring.piece_dimension(d - pres.source.twist(k));
  if (ncols == 0) return dim;
  ExactMatrix mat(ring.field(), ncols, dim);
  std::size_t row = 0;
  for (std::size_t k = 0; k < pres.columns.size(); ++k) {
    const int e = d - pres.source.twist(k);
    if (e < 0) continue;
    for (const Monomial& u : ring.monomials_of_degree(e)) {
      ModuleElement s = pres.columns[k];
      for (auto& comp : s.components) comp = ring.multiply_term(comp, u, 1);
      Vector v = target.dense(s);
      std::copy(v.begin(), v.end(), mat.row(row).begin());
      ++row;
    }
  }
  return dim - rank(mat);
}

std::size_t hilbert_function_M(const GradedMatrix& m, int d) {
  return cokernel_dimension(m.ring(), m.presentation(), d);
}

namespace {

// Generator degrees Σ_J a - Σ_K b - Σ b over |J| = j_size strict, |K| = k_size weak.
void add_wedge_sym_terms(BettiTable& table, int position, const DegreeMatrixSpec& spec, std::size_t j_size,
                         std::size_t k_size) {
  int sum_b = 0;
  for (int bi : spec.b) sum_b += bi;
  for_each_subset(spec.a.size(), j_size, [&](const std::vector<std::size_t>& J) {
    int sa = 0;
    for (std::size_t j : J) sa += spec.a[j];
    for_each_multiset(spec.b.size(), k_size, [&](const std::vector<std::size_t>& K) {
      int sk = 0;
      for (std::size_t k : K) sk += spec.b[k];
      table.add(position, sa - sk - sum_b);
    });
  });
}

}  // namespace

BettiTable eagon_northcott_betti(const DegreeMatrixSpec& spec) {
  BettiTable t;
  t.add(0, 0);
  const std::size_t tt = spec.t();
  for (int i = 1; i <= spec.c(); ++i)
    add_wedge_sym_terms(t, i, spec, tt + static_cast<std::size_t>(i) - 1, static_cast<std::size_t>(i) - 1);
  return t;
}

BettiTable buchsbaum_rim_betti(const DegreeMatrixSpec& spec) {
  BettiTable t;
  for (int bi : spec.b) t.add(0, bi);
  for (int aj : spec.a) t.add(1, aj);
  const std::size_t tt = spec.t();
  for (int i = 0; i <= spec.c() - 2; ++i)
    add_wedge_sym_terms(t, i + 2, spec, tt + static_cast<std::size_t>(i) + 1, static_cast<std::size_t>(i));
  return t;
}

std::int64_t alternating_hilbert(const BettiTable& table, int n, int d) {
  std::int64_t s = 0;
  for (const auto& [key, count] : table.entries()) {
    const auto [i, j] = key;
    const auto dim = static_cast<std::int64_t>(graded_piece_dimension(d - j, n));
    s += (i % 2 == 0 ? 1 : -1) * static_cast<std::int64_t>(count) * dim;
  }
  return s;
}

}  // namespace detstrata
