#pragma once

#include <array>
#include <compare>
#include <cstddef>
#include <cstdint>
#include <memory>
#include <random>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "detstrata/arith.hpp"

namespace detstrata {

inline constexpr std::size_t kMaxVariables = 16;
inline constexpr int kMaxExponent = 255;
// Largest degree for which graded pieces can be indexed.
inline constexpr int kMaxIndexedDegree = 80;

using Rng = std::mt19937_64;

class Monomial {
 public:
  Monomial() = default;
  static Monomial from_exponents(std::span<const int> exponents);
  static Monomial variable(std::size_t v);

  int exponent(std::size_t v) const noexcept { return exps_[v]; }
  int degree() const noexcept { return degree_; }
  // Index of the last variable with a positive exponent, or -1 for 1.
  int last_variable() const noexcept;

  Monomial operator*(const Monomial& other) const;
  bool divides(const Monomial& other) const noexcept;
  // Precondition: divisor divides *this.
  Monomial divided_by(const Monomial& divisor) const noexcept;
  Monomial lcm(const Monomial& other) const noexcept;
  bool coprime(const Monomial& other) const noexcept;

  bool operator==(const Monomial&) const = default;

 private:
  std::array<std::uint8_t, kMaxVariables> exps_{};
  std::uint16_t degree_ = 0;
};

// Graded reverse lexicographic comparison; greater means larger in the order.
std::strong_ordering grevlex(const Monomial& a, const Monomial& b) noexcept;

struct MonomialGreater {
  bool operator()(const Monomial& a, const Monomial& b) const noexcept {
    return grevlex(a, b) == std::strong_ordering::greater;
  }
};

struct Term {
  Monomial monomial;
  Residue coefficient;
  bool operator==(const Term&) const = default;
};

// Terms sorted strictly descending in grevlex, no zero coefficients.
class Polynomial {
 public:
  Polynomial() = default;

  bool is_zero() const noexcept { return terms_.empty(); }
  std::size_t size() const noexcept { return terms_.size(); }
  const std::vector<Term>& terms() const noexcept { return terms_; }
  const Term& leading_term() const { return terms_.front(); }
  // Degree of the leading term; -1 for zero.
  int degree() const noexcept { return terms_.empty() ? -1 : terms_.front().monomial.degree(); }
  bool is_homogeneous() const noexcept;
  bool is_constant() const noexcept {
    return terms_.size() == 1 && terms_.front().monomial.degree() == 0;
  }
  bool operator==(const Polynomial&) const = default;

  // Caller guarantees the ordering and nonzero invariants.
  static Polynomial from_sorted_terms(std::vector<Term> terms);

 private:
  std::vector<Term> terms_;
};

// C(d+n, n) for d >= 0, else 0. Here n + 1 is the number of variables.
std::uint64_t graded_piece_dimension(int d, int n);

class MonomialTable;

// The ring GF(p)[x0..xn].
class PolyRing {
 public:
  PolyRing(std::size_t num_variables, PrimeField field);

  std::size_t num_variables() const noexcept { return nvars_; }
  // The projective dimension n (num_variables - 1).
  int n() const noexcept { return static_cast<int>(nvars_) - 1; }
  const PrimeField& field() const noexcept { return field_; }

  Polynomial constant(std::int64_t c) const;
  Polynomial variable(std::size_t v) const;
  Polynomial term(const Monomial& m, Residue c = 1) const;

  Polynomial add(const Polynomial& f, const Polynomial& g) const;
  Polynomial subtract(const Polynomial& f, const Polynomial& g) const;
  Polynomial negate(const Polynomial& f) const;
  Polynomial scale(const Polynomial& f, Residue c) const;
  Polynomial multiply(const Polynomial& f, const Polynomial& g) const;
  Polynomial multiply_term(const Polynomial& f, const Monomial& m, Residue c) const;
  Polynomial normalize(std::vector<Term> terms) const;  // sort and combine

  // Graded pieces, ordered descending in grevlex.
  const std::vector<Monomial>& monomials_of_degree(int d) const;
  std::size_t piece_dimension(int d) const;
  // Position of m inside monomials_of_degree(m.degree()).
  std::size_t monomial_index(const Monomial& m) const noexcept;

  Vector dense(const Polynomial& f, int d) const;
  Polynomial from_dense(int d, std::span<const Residue> coeffs) const;

  // Every monomial of degree d gets a coefficient drawn uniformly from GF(p);
  // degree 0 draws a nonzero constant and d < 0 gives zero.
  Polynomial random_homogeneous(int d, Rng& rng) const;
  Residue random_residue(Rng& rng) const;
  Residue random_nonzero(Rng& rng) const;

  Polynomial parse(std::string_view text) const;
  std::string format(const Polynomial& f) const;

 private:
  std::size_t nvars_;
  PrimeField field_;
  std::shared_ptr<MonomialTable> table_;
};

std::string format_monomial(const Monomial& m);

}  // namespace detstrata
