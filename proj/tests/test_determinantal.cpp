#include <algorithm>

#include "detstrata/determinantal.hpp"
#include "detstrata/errors.hpp"
#include "detstrata/graded.hpp"
#include "doctest.h"

using namespace detstrata;

namespace {

DegreeMatrixSpec make_spec(int n, std::vector<int> b, std::vector<int> a, std::uint64_t seed = 1) {
  DegreeMatrixSpec s;
  s.n = n;
  s.b = std::move(b);
  s.a = std::move(a);
  s.seed = seed;
  return s;
}

std::vector<ModuleElement> as_ideal(const std::vector<Polynomial>& gens) {
  std::vector<ModuleElement> out;
  for (const auto& g : gens)
    if (!g.is_zero()) out.push_back(ModuleElement({g}));
  return out;
}

// dim (R/I)_d from the span of monomial multiples.
std::size_t quotient_by_span(const PolyRing& r, const std::vector<Polynomial>& gens, int d) {
  if (d < 0) return 0;
  EchelonBasis span(r.field(), r.piece_dimension(d));
  for (const auto& g : gens) {
    if (g.is_zero()) continue;
    for (const Monomial& u : r.monomials_of_degree(d - g.degree())) span.insert(r.dense(r.multiply_term(g, u, 1), d));
  }
  return r.piece_dimension(d) - span.rank();
}

}  // namespace

TEST_SUITE("determinantal") {
  TEST_CASE("spec validation") {
    CHECK_NOTHROW(make_spec(3, {0, 0}, {1, 1, 1}).validate());
    CHECK_THROWS_AS(make_spec(3, {0, 0}, {1, 1}).validate(), InvalidInput);  // c = 1
    CHECK_THROWS_AS(make_spec(3, {0}, {1, 1}).validate(), InvalidInput);
    CHECK_THROWS_AS(make_spec(3, {1, 0}, {1, 1, 1}).validate(), InvalidInput);
    CHECK_THROWS_AS(make_spec(1, {0, 0}, {1, 1, 1, 1}).validate(), InvalidInput);  // c > n+1
    auto s = make_spec(3, {0, 0}, {1, 1, 1});
    s.p = 10000;
    CHECK_THROWS_AS(s.validate(), InvalidInput);
  }

  TEST_CASE("sampling shape, zeros and determinism") {
    auto s = make_spec(3, {0, 0}, {1, 1, 1}, 5);
    GradedMatrix m = sample_matrix(s);
    CHECK(m.rows() == 2);
    CHECK(m.cols() == 3);
    for (std::size_t i = 0; i < 2; ++i)
      for (std::size_t j = 0; j < 3; ++j) CHECK(m.entry(i, j).degree() == 1);
    CHECK(sample_matrix(s).entries() == m.entries());
    s.seed = 6;
    CHECK(sample_matrix(s).entries() != m.entries());

    auto z = make_spec(2, {0, 2}, {1, 2, 3});  // a_0 - b_2 < 0, a_1 - b_2 = 0
    GradedMatrix mz = sample_matrix(z);
    CHECK(mz.entry(1, 0).is_zero());
    CHECK(mz.entry(1, 1).is_zero());
    z.allow_constants = true;
    CHECK(sample_matrix(z).entry(1, 1).is_constant());
  }

  TEST_CASE("explicit entries override sampling") {
    auto s = make_spec(2, {0, 0}, {1, 1, 1});
    s.explicit_entries = {{std::string("x0"), std::nullopt, std::string("0")}, {}};
    GradedMatrix m = sample_matrix(s);
    CHECK(m.entry(0, 0) == m.ring().variable(0));
    CHECK(m.entry(0, 2).is_zero());
    CHECK(m.entry(1, 0).degree() == 1);
    s.explicit_entries = {{std::string("x0^2"), std::nullopt, std::nullopt}, {}};
    CHECK_THROWS_AS(sample_matrix(s), InvalidInput);
  }

  TEST_CASE("twisted cubic minors") {
    PolyRing r(4, PrimeField());
    auto s = make_spec(3, {0, 0}, {1, 1, 1});
    GradedMatrix m(s, r, {{r.variable(0), r.variable(1), r.variable(2)}, {r.variable(1), r.variable(2), r.variable(3)}});
    auto minors = m.maximal_minors();
    REQUIRE(minors.size() == 3);
    CHECK(minors[0] == r.parse("x0*x2 - x1^2"));
    CHECK(minors[1] == r.parse("x0*x3 - x1*x2"));
    CHECK(minors[2] == r.parse("x1*x3 - x2^2"));
    auto cr = codimension_check(m);
    CHECK(cr.codim_maximal == 2);
    CHECK(cr.standard);
    CHECK(cr.good == Goodness::good);
  }

  TEST_CASE("minor degrees follow the degree matrix") {
    auto s = make_spec(3, {-1, 0, 1}, {1, 2, 2, 3, 4});
    GradedMatrix m = sample_matrix(s);
    auto cols = m.maximal_minor_columns();
    auto minors = m.maximal_minors();
    REQUIRE(cols.size() == 10);
    for (std::size_t k = 0; k < cols.size(); ++k) {
      CHECK(minors[k].is_homogeneous());
      if (!minors[k].is_zero()) CHECK(minors[k].degree() == m.maximal_minor_degree(cols[k]));
    }
  }

  TEST_CASE("laplace expansion agrees with the 3x3 rule") {
    auto s = make_spec(2, {0, 0, 0}, {1, 1, 1, 1});
    GradedMatrix m = sample_matrix(s);
    const PolyRing& r = m.ring();
    auto e = [&](std::size_t i, std::size_t j) { return m.entry(i, j); };
    Polynomial sarrus;
    const int perms[6][3] = {{0, 1, 2}, {1, 2, 0}, {2, 0, 1}, {0, 2, 1}, {2, 1, 0}, {1, 0, 2}};
    for (int k = 0; k < 6; ++k) {
      Polynomial p = r.multiply(r.multiply(e(0, perms[k][0]), e(1, perms[k][1])), e(2, perms[k][2]));
      sarrus = k < 3 ? r.add(sarrus, p) : r.subtract(sarrus, p);
    }
    CHECK(m.minor({0, 1, 2}, {0, 1, 2}) == sarrus);
  }

  TEST_CASE("degenerate matrices are not standard") {
    auto s = make_spec(3, {0, 0}, {1, 1, 1});
    GradedMatrix g = sample_matrix(s);
    GradedMatrix rep(s, g.ring(), {g.entries()[0], g.entries()[0]});
    auto cr = codimension_check(rep);
    CHECK(cr.codim_maximal == 0);
    CHECK_FALSE(cr.standard);
    CHECK_THROWS_AS(build_flag(rep), NotStandard);
  }

  TEST_CASE("linear matrix with one column of degree m is artinian") {
    for (int m : {2, 3}) {
      auto s = make_spec(2, {0, 0}, {1, 1, 1, m});
      auto ss = sample_standard(s);
      CHECK(ss.codim.standard);
      CHECK(ss.codim.codim_maximal == 3);
      CHECK(ss.codim.artinian);
      CHECK(ss.codim.good != Goodness::not_good);
    }
  }

  TEST_CASE("flag and the regular section sequence") {
    auto s = make_spec(3, {0, 0}, {1, 1, 1, 1});
    auto ss = sample_standard(s);
    REQUIRE(ss.codim.standard);
    auto flag = build_flag(ss.matrix);
    REQUIRE(flag.size() == 2);
    CHECK(flag[0].matrix.cols() == 3);
    CHECK(flag[1].matrix.entries() == ss.matrix.entries());
    for (std::size_t j = 0; j < 3; ++j) CHECK(flag[0].matrix.entry(1, j) == ss.matrix.entry(1, j));
    const PolyRing& r = ss.matrix.ring();
    const int a_next = s.a[s.t() + 2 - 1];
    for (int v = -3; v <= 5; ++v) {
      auto hd = static_cast<std::int64_t>(quotient_by_span(r, flag[0].ideal, v));
      auto hm = static_cast<std::int64_t>(cokernel_dimension(r, flag[0].module, v + a_next));
      auto hm1 = static_cast<std::int64_t>(cokernel_dimension(r, flag[1].module, v + a_next));
      CHECK(hd - hm + hm1 == 0);
    }
    auto c2 = build_flag(sample_standard(make_spec(3, {0, 0}, {1, 1, 1})).matrix);
    CHECK(c2.size() == 1);
  }

  TEST_CASE("hilbert function of M equals the Buchsbaum-Rim alternating sum") {
    Rng pick(3);
    int checked = 0;
    for (int trial = 0; trial < 8; ++trial) {
      int t = 2 + static_cast<int>(pick() % 2);
      int c = 2 + static_cast<int>(pick() % 2);
      int n = c + static_cast<int>(pick() % 2);
      std::vector<int> b, a;
      for (int i = 0; i < t; ++i) b.push_back(static_cast<int>(pick() % 2));
      std::sort(b.begin(), b.end());
      for (int j = 0; j < t + c - 1; ++j) a.push_back(b.back() + 1 + static_cast<int>(pick() % 2));
      std::sort(a.begin(), a.end());
      auto s = make_spec(n, b, a, trial);
      auto ss = sample_standard(s);
      REQUIRE(ss.codim.standard);
      BettiTable br = buchsbaum_rim_betti(s);
      for (int d = -1; d <= 7; ++d)
        CHECK(static_cast<std::int64_t>(hilbert_function_M(ss.matrix, d)) == alternating_hilbert(br, n, d));
      ++checked;
    }
    CHECK(checked == 8);
  }

  TEST_CASE("hilbert function of M vanishes below the generators") {
    auto s = make_spec(2, {1, 2}, {3, 3, 3});
    GradedMatrix m = sample_matrix(s);
    CHECK(hilbert_function_M(m, 0) == 0);
    CHECK(hilbert_function_M(m, 1) == 1);
  }

  TEST_CASE("h-vector of a linear matrix with a column of degree m in four variables") {
    const int m = 3;
    auto ss = sample_standard(make_spec(3, {0, 0}, {1, 1, 1, 1, m}));
    REQUIRE(ss.codim.standard);
    const PolyRing& r = ss.matrix.ring();
    GradedQuotient a(r, GradedFreeModule({0}), as_ideal(ss.matrix.maximal_minors()), m + 3);
    std::vector<std::size_t> h;
    for (int d = 0; d <= m + 2; ++d) h.push_back(a.dimension(d));
    CHECK(h == std::vector<std::size_t>{1, 4, 4, 4, 0, 0});
  }

  TEST_CASE("eagon-northcott shapes") {
    auto lin = make_spec(3, {0, 0}, {1, 1, 1});
    BettiTable en = eagon_northcott_betti(lin);
    CHECK(en.at(0, 0) == 1);
    CHECK(en.at(1, 2) == 3);
    CHECK(en.at(2, 3) == 2);
    CHECK(en.length() == 2);

    auto g = make_spec(2, {-3, -1}, {0, 0, 0, 0});
    BettiTable t = eagon_northcott_betti(g);
    CHECK(t.at(1, 4) == 6);
    CHECK(t.at(2, 7) == 4);
    CHECK(t.at(2, 5) == 4);
    CHECK(t.at(3, 10) == 1);
    CHECK(t.at(3, 8) == 1);
    CHECK(t.at(3, 6) == 1);
    CHECK(t.total(3) == 3);

    // c = 2: Hilbert-Burch shape
    auto hb = eagon_northcott_betti(make_spec(2, {0, 1, 1}, {2, 2, 3, 3}));
    CHECK(hb.total(0) == 1);
    CHECK(hb.total(1) == 4);
    CHECK(hb.total(2) == 3);
    CHECK(hb.length() == 2);
  }

  TEST_CASE("eagon-northcott matches the syzygy engine for a general matrix") {
    for (auto s : {make_spec(3, {0, 0}, {1, 1, 1}), make_spec(3, {0, 0}, {1, 1, 2, 2}), make_spec(3, {0, 1, 1}, {2, 2, 2, 3})}) {
      auto ss = sample_standard(s);
      REQUIRE(ss.codim.standard);
      auto minors = ss.matrix.maximal_minors();
      std::vector<int> degs;
      for (const auto& f : minors) degs.push_back(f.degree());
      GradedModulePresentation pres{GradedFreeModule(degs), GradedFreeModule({0}), as_ideal(minors)};
      auto res = minimal_free_resolution(ss.matrix.ring(), pres);
      CHECK(res.betti == eagon_northcott_betti(s));
    }
  }

  TEST_CASE("buchsbaum-rim ranks and the minimal resolution of M") {
    auto s = make_spec(3, {0, 0}, {1, 1, 1, 2});
    BettiTable br = buchsbaum_rim_betti(s);
    // last term: C(t+c-1, t+c-1) * C(t+c-3, c-2)
    CHECK(br.total(3) == 1 * 2);
    CHECK(br.total(2) == 4);
    auto ss = sample_standard(s);
    REQUIRE(ss.codim.standard);
    auto res = minimal_free_resolution(ss.matrix.ring(), ss.matrix.presentation());
    CHECK(res.betti == br);
  }

  TEST_CASE("fitting: the annihilator of M is the ideal of maximal minors") {
    for (auto s : {make_spec(3, {0, 0}, {1, 1, 1}), make_spec(2, {0, 0}, {1, 1, 1, 2}), make_spec(2, {-1, 0}, {1, 1, 1})}) {
      auto ss = sample_standard(s);
      REQUIRE(ss.codim.standard);
      const PolyRing& r = ss.matrix.ring();
      auto minors = ss.matrix.maximal_minors();
      GradedQuotient m(r, GradedFreeModule(s.b), ss.matrix.presentation().columns, 8);
      // each minor kills each generator
      for (const auto& f : minors)
        for (std::size_t i = 0; i < s.t(); ++i) {
          Vector e(m.dimension(s.b[i]), 0);
          ModuleElement gen = ModuleElement::zero(s.t());
          gen.components[i] = r.constant(1);
          Vector img = m.multiply(s.b[i], m.normal_form(gen, s.b[i]), f);
          CHECK(std::all_of(img.begin(), img.end(), [](Residue x) { return x == 0; }));
        }
      // dim ann(M)_d = dim (I_t)_d
      for (int d = 0; d <= 5; ++d) {
        const auto& mons = r.monomials_of_degree(d);
        std::size_t rows = 0;
        for (std::size_t i = 0; i < s.t(); ++i) rows += m.dimension(d + s.b[i]);
        ExactMatrix mat(r.field(), rows, mons.size());
        for (std::size_t col = 0; col < mons.size(); ++col) {
          std::size_t off = 0;
          for (std::size_t i = 0; i < s.t(); ++i) {
            ModuleElement gen = ModuleElement::zero(s.t());
            gen.components[i] = r.term(mons[col]);
            Vector v = m.normal_form(gen, d + s.b[i]);
            for (std::size_t k = 0; k < v.size(); ++k) mat.set(off + k, col, v[k]);
            off += v.size();
          }
        }
        const std::size_t ann = mons.size() - rank(mat);
        CHECK(ann == mons.size() - quotient_by_span(r, minors, d));
      }
    }
  }

  TEST_CASE("row operations preserve the ideal of maximal minors") {
    auto s = make_spec(2, {0, 0, 0}, {1, 1, 1, 1});
    GradedMatrix m = sample_matrix(s);
    const PolyRing& r = m.ring();
    Rng rng(9);
    // C = lower unitriangular with a random diagonal scaling
    auto e = m.entries();
    Residue c10 = r.random_residue(rng), c20 = r.random_residue(rng), c21 = r.random_residue(rng);
    Residue d0 = r.random_nonzero(rng);
    std::vector<std::vector<Polynomial>> ce(3);
    for (std::size_t j = 0; j < 4; ++j) {
      ce[0].push_back(r.scale(e[0][j], d0));
      ce[1].push_back(r.add(e[1][j], r.scale(e[0][j], c10)));
      ce[2].push_back(r.add(r.add(e[2][j], r.scale(e[0][j], c20)), r.scale(e[1][j], c21)));
    }
    GradedMatrix cm(s, r, ce);
    auto gb1 = buchberger(r, GradedFreeModule({0}), as_ideal(m.maximal_minors()));
    auto gb2 = buchberger(r, GradedFreeModule({0}), as_ideal(cm.maximal_minors()));
    CHECK(gb1 == gb2);
  }
}
