#include <random>

#include "detstrata/arith.hpp"
#include "detstrata/errors.hpp"
#include "doctest.h"

using namespace detstrata;

namespace {

ExactMatrix random_matrix(PrimeField f, std::size_t r, std::size_t c, std::mt19937_64& rng) {
  ExactMatrix m(f, r, c);
  for (std::size_t i = 0; i < r; ++i)
    for (std::size_t j = 0; j < c; ++j) m.set(i, j, static_cast<Residue>(rng() % f.characteristic()));
  return m;
}

// Rank of a product of random rank-k factors is k with high probability.
ExactMatrix low_rank(PrimeField f, std::size_t r, std::size_t c, std::size_t k, std::mt19937_64& rng) {
  return random_matrix(f, r, k, rng) * random_matrix(f, k, c, rng);
}

// Independent elimination: pivots chosen from the last column backwards,
// arithmetic in plain 64-bit integers.
std::size_t oracle_rank(const ExactMatrix& m) {
  const std::int64_t p = m.field().characteristic();
  std::vector<std::vector<std::int64_t>> a(m.rows(), std::vector<std::int64_t>(m.cols()));
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j) a[i][j] = m.at(i, j);
  auto inv = [&](std::int64_t x) {
    std::int64_t r = 1, e = p - 2, b = x % p;
    while (e) {
      if (e & 1) r = r * b % p;
      b = b * b % p;
      e >>= 1;
    }
    return r;
  };
  std::vector<char> used(m.rows(), 0);
  std::size_t rank = 0;
  for (std::size_t jj = m.cols(); jj-- > 0;) {
    std::size_t piv = m.rows();
    for (std::size_t i = m.rows(); i-- > 0;)
      if (!used[i] && a[i][jj] % p) piv = i;
    if (piv == m.rows()) continue;
    used[piv] = 1;
    ++rank;
    std::int64_t iv = inv(a[piv][jj]);
    for (std::size_t i = 0; i < m.rows(); ++i) {
      if (i == piv || a[i][jj] % p == 0) continue;
      std::int64_t f = a[i][jj] * iv % p;
      for (std::size_t j = 0; j < m.cols(); ++j) a[i][j] = ((a[i][j] - f * a[piv][j]) % p + p) % p;
    }
  }
  return rank;
}

}  // namespace

TEST_SUITE("arith") {
  TEST_CASE("field construction checks primality") {
    CHECK_THROWS_AS(PrimeField(10), InvalidInput);
    CHECK_THROWS_AS(PrimeField(2), InvalidInput);
    PrimeField f(7);
    CHECK(f.mul(3, 5) == 1);
    CHECK(f.inv(3) == 5);
    CHECK(f.centered(6) == -1);
    CHECK(f.reduce(-1) == 6);
  }

  TEST_CASE("rank of trivial matrices") {
    PrimeField f;
    CHECK(rank(ExactMatrix(f, 3, 3)) == 0);
    CHECK(rank(ExactMatrix::identity(f, 4)) == 4);
  }

  TEST_CASE("rank agrees with an independent elimination") {
    PrimeField f(101);
    std::mt19937_64 rng(11);
    for (int trial = 0; trial < 30; ++trial) {
      ExactMatrix m = trial % 2 ? random_matrix(f, 5, 7, rng) : low_rank(f, 5, 7, 1 + trial % 4, rng);
      std::size_t r = rank(m);
      CHECK(r == oracle_rank(m));
      CHECK(r == rank_by_columns(m));
      CHECK(r == rank(m.transposed()));
    }
  }

  TEST_CASE("kernel basis") {
    PrimeField f7(7);
    CHECK(kernel_basis(ExactMatrix::identity(f7, 3)).empty());
    ExactMatrix row(f7, 1, 2);
    row.set(0, 0, 1);
    row.set(0, 1, 1);
    auto k = kernel_basis(row);
    REQUIRE(k.size() == 1);
    // (1, 6) up to scalar
    CHECK(f7.mul(k[0][0], 6) == k[0][1]);

    PrimeField f;
    std::mt19937_64 rng(5);
    ExactMatrix m = low_rank(f, 6, 4, 3, rng);
    REQUIRE(rank(m) == 3);
    auto ker = kernel_basis(m);
    REQUIRE(ker.size() == 1);
    for (Residue x : m.apply(ker[0])) CHECK(x == 0);
  }

  TEST_CASE("rank-nullity on random shapes") {
    PrimeField f;
    std::mt19937_64 rng(17);
    for (int trial = 0; trial < 40; ++trial) {
      std::size_t r = 1 + rng() % 9, c = 1 + rng() % 9, k = 1 + rng() % 5;
      ExactMatrix m = low_rank(f, r, c, k, rng);
      auto ker = kernel_basis(m);
      CHECK(ker.size() + rank(m) == c);
      for (const auto& v : ker)
        for (Residue x : m.apply(v)) CHECK(x == 0);
    }
  }

  TEST_CASE("solve") {
    PrimeField f;
    Vector rhs{3, 1, 4};
    auto x = solve(ExactMatrix::identity(f, 3), rhs);
    REQUIRE(x);
    CHECK(*x == rhs);
    CHECK_FALSE(solve(ExactMatrix(f, 3, 3), rhs));
    CHECK_THROWS_AS(solve_or_throw(ExactMatrix(f, 3, 3), rhs), InconsistentSystem);

    std::mt19937_64 rng(3);
    for (int trial = 0; trial < 20; ++trial) {
      ExactMatrix m = low_rank(f, 6, 5, 3, rng);
      Vector x0(5);
      for (auto& v : x0) v = static_cast<Residue>(rng() % f.characteristic());
      Vector b = m.apply(x0);
      auto sol = solve(m, b);
      REQUIRE(sol);
      CHECK(m.apply(*sol) == b);
    }
  }

  TEST_CASE("echelon basis tracks span") {
    PrimeField f;
    EchelonBasis e(f, 3);
    CHECK(e.insert({1, 2, 3}));
    CHECK(e.insert({2, 4, 7}));
    CHECK_FALSE(e.insert({3, 6, 10}));
    CHECK(e.rank() == 2);
    CHECK(e.contains(Vector{0, 0, 5}));
    CHECK_FALSE(e.contains(Vector{0, 1, 0}));
  }
}
