#include "detstrata/errors.hpp"
#include "detstrata/formulas.hpp"
#include "detstrata/homext.hpp"
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

GradedMatrix standard(const DegreeMatrixSpec& s) {
  auto ss = sample_standard(s);
  REQUIRE(ss.codim.standard);
  return ss.matrix;
}

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

TEST_SUITE("homext") {
  TEST_CASE("hom of M into itself is the ground field") {
    for (auto s : {make_spec(2, {0, 0}, {1, 1, 1, 3}), make_spec(3, {0, 0}, {1, 1, 1}), make_spec(2, {0, 1, 1}, {2, 2, 3, 3})}) {
      GradedMatrix m = standard(s);
      HomExtContext ctx(m);
      CHECK(ctx.hom_A_MM() == 1);
      // independent count through the presentation of M
      GradedModulePresentation pres = m.presentation();
      CHECK(hom_degree_zero(pres, ctx.M(s.a.back() + 1)).size() == 1);
    }
  }

  TEST_CASE("ext1_R equals lambda") {
    for (auto s : {make_spec(2, {0, 0}, {1, 1, 1, 3}), make_spec(3, {0, 0}, {1, 1, 1, 1}), make_spec(2, {-1, 0}, {1, 1, 1, 1}),
                   make_spec(3, {0, 1}, {1, 2, 2, 3})}) {
      auto e = ext1_R_MM(standard(s));
      CHECK(e.hom_M_M == 1);
      CHECK(static_cast<std::int64_t>(e.dimension) == lambda(s));
      CHECK(e.cocycles.size() == e.dimension);
    }
  }

  TEST_CASE("points in P^c") {
    for (int c : {3, 4}) {
      std::vector<int> a(static_cast<std::size_t>(c + 1), 1);
      HomExtContext ctx(standard(make_spec(c, {0, 0}, a)));
      const auto& f = ctx.five_term();
      CHECK(f.ext1_R == static_cast<std::size_t>(c * (c + 1) + c - 2));
      CHECK(f.ext1_A == static_cast<std::size_t>(c - 2));
      CHECK(f.hom_I_A == static_cast<std::size_t>(c * (c + 1)));
      auto e1 = ctx.ext_A_MM(1);
      CHECK(e1.exact);
      CHECK(e1.method == "certified");
      CHECK(e1.dimension == static_cast<std::size_t>(c - 2));
    }
  }

  TEST_CASE("trace of the adjoint against phi itself") {
    GradedMatrix m = standard(make_spec(2, {0, 0, 1}, {1, 1, 2, 2, 2}));
    auto g = trace_of_adjoint(m, m.entries());
    auto minors = m.maximal_minors();
    REQUIRE(g.size() == minors.size());
    for (std::size_t k = 0; k < g.size(); ++k) CHECK(g[k] == m.ring().scale(minors[k], 3));
  }

  TEST_CASE("trace images are homomorphisms for random directions") {
    GradedMatrix m = standard(make_spec(2, {0, 0}, {1, 1, 2, 2}));
    HomExtContext ctx(m);
    Rng rng(5);
    std::vector<EtaMatrix> etas;
    for (int trial = 0; trial < 6; ++trial) {
      EtaMatrix eta(m.rows(), std::vector<Polynomial>(m.cols()));
      for (std::size_t i = 0; i < m.rows(); ++i)
        for (std::size_t j = 0; j < m.cols(); ++j) eta[i][j] = m.ring().random_homogeneous(m.spec().degree(i, j), rng);
      etas.push_back(eta);
    }
    ExactMatrix tm(PrimeField(), 0, 0);
    CHECK_NOTHROW(tm = ctx.tangent_map_eM(etas));
    CHECK(tm.cols() == etas.size());
    // every image lies in 0Hom(I,A)
    EchelonBasis span(m.ring().field(), tm.rows());
    for (const Vector& h : ctx.hom_I_A_basis()) span.insert(h);
    for (std::size_t c = 0; c < tm.cols(); ++c) {
      Vector v(tm.rows());
      for (std::size_t r = 0; r < tm.rows(); ++r) v[r] = tm.at(r, c);
      CHECK(span.contains(v));
    }
  }

  TEST_CASE("complete intersection with a zero minor") {
    auto s = make_spec(2, {0, 0}, {0, 2, 3});
    s.explicit_entries = {{std::string("1"), std::string("0"), std::string("0")},
                          {std::string("0"), std::nullopt, std::nullopt}};
    GradedMatrix m = sample_matrix(s);
    HomExtContext ctx(m);
    REQUIRE(ctx.minors().size() == 2);
    const std::size_t expect = quotient_by_span(m.ring(), ctx.minors(), 2) + quotient_by_span(m.ring(), ctx.minors(), 3);
    CHECK(ctx.hom_I_A() == expect);
    auto cn = ctx.ext1_A_conormal();
    CHECK(cn.ext1.dimension == 0);
    CHECK(cn.hom.dimension == expect);
    CHECK_NOTHROW(ctx.five_term());
  }

  TEST_CASE("five-term bookkeeping and the two routes to ext1_A") {
    for (auto s : {make_spec(2, {0, 0}, {1, 1, 1, 2}), make_spec(2, {0, 0}, {1, 1, 1, 3}), make_spec(2, {-1, 0}, {1, 1, 1, 1}),
                   make_spec(2, {0, 0}, {1, 1, 2, 3}), make_spec(3, {0, 0}, {1, 1, 1, 1, 2}), make_spec(2, {0, 0, 0}, {1, 1, 1, 1, 1})}) {
      HomExtContext ctx(standard(s));
      const auto& f = ctx.five_term();
      CHECK(f.ext1_A + f.rank_delta0 == f.ext1_R);
      CHECK(f.ker_ext2 + f.rank_delta0 == f.dim_E2);
      CHECK(f.rank_delta0 <= f.rank_i);
      CHECK(f.rank_i == f.hom_I_A);  // A -> Hom_A(M,M) is injective
      auto e1 = ctx.ext_A_MM(1);
      REQUIRE(e1.exact);
      CHECK(e1.dimension == f.ext1_A);
      CHECK(ctx.ext1_A_conormal().hom.dimension == f.hom_I_A);
    }
  }

  TEST_CASE("linear 2x4 plus a column of degree m on the plane") {
    {
      HomExtContext ctx(standard(make_spec(2, {0, 0}, {1, 1, 1, 3})));
      const auto& f = ctx.five_term();
      CHECK(f.hom_A_MM == 1);
      CHECK(f.ext1_A == 2);
      CHECK(f.rank_eM == f.ext1_R - 2);
      CHECK(f.delta0_surjective);
      CHECK(ctx.ext_A_MM(1).dimension == 2);
    }
    {
      HomExtContext ctx(standard(make_spec(2, {0, 0}, {1, 1, 1, 2})));
      const auto& f = ctx.five_term();
      CHECK(f.first_inclusion_strict);
      CHECK(f.second_inclusion_strict);
      CHECK_FALSE(f.delta0_surjective);
      CHECK(ctx.ext_A_MM(2).dimension > 0);
    }
  }

  TEST_CASE("a column of degree m on the plane gives a full rank tangent map") {
    HomExtContext ctx(standard(make_spec(2, {0, 0}, {1, 1, 2, 5})));
    const auto& f = ctx.five_term();
    CHECK(f.ext1_A == 0);
    CHECK(f.rank_eM == 14);
    CHECK(f.hom_I_A == 16);
    auto cn = ctx.ext1_A_conormal();
    CHECK(cn.ext1.dimension == 0);
    CHECK(cn.hom.dimension == 16);
  }

  TEST_CASE("rows of degree two and one") {
    HomExtContext ctx(standard(make_spec(2, {-1, 0}, {1, 1, 1, 1})));
    CHECK(ctx.hom_I_A() == 20);
    auto e2 = ctx.ext_A_MM(2);
    CHECK(e2.exact);
    CHECK(e2.dimension == 10);
    CHECK(ctx.five_term().ker_ext2 <= e2.dimension);
  }

  TEST_CASE("three rows on the plane") {
    HomExtContext ctx(standard(make_spec(2, {-1, 0, 0}, {1, 1, 1, 1, 1})));
    auto cn = ctx.ext1_A_conormal();
    CHECK(cn.hom.dimension == 40);
    CHECK(cn.ext1.dimension == 0);
  }

  TEST_CASE("vanishing Ext^2 over A") {
    HomExtContext ctx(standard(make_spec(2, {-2, 0}, {1, 1, 1, 1})));
    CHECK(ctx.hom_I_A() == 29);
    CHECK(ctx.ext_A_MM(1).dimension == 0);
    CHECK(ctx.ext_A_MM(2).dimension == 0);
    CHECK(ctx.ext1_A_conormal().ext1.dimension != 0);
  }

  TEST_CASE("good determinantal with deep submaximal minors has ext1_A = 0") {
    for (auto s : {make_spec(5, {0, 0}, {1, 1, 1, 1}), make_spec(4, {0, 0}, {1, 1, 1}), make_spec(5, {0, 0}, {1, 1, 1, 2})}) {
      GradedMatrix m = standard(s);
      REQUIRE(codimension_check(m).good == Goodness::good);
      HomExtContext ctx(m);
      const auto& f = ctx.five_term();
      CHECK(f.ext1_A == 0);
      CHECK(f.i_is_iso);  // Hom_A(M,M) = A
    }
  }

  TEST_CASE("homological bound is enforced") {
    HomExtOptions o;
    o.max_level = 2;
    HomExtContext ctx(standard(make_spec(2, {0, 0}, {1, 1, 1, 3})), o);
    CHECK_NOTHROW(ctx.ext_A_MM(1));
    CHECK_THROWS_AS(ctx.ext_A_MM(2), TruncationExceeded);
  }
}
