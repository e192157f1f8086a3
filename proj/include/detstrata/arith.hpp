#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

namespace detstrata {

// Residues are kept in [0, p).
using Residue = std::uint32_t;
using Vector = std::vector<Residue>;

inline constexpr std::uint32_t kDefaultPrime = 10007;

class PrimeField {
 public:
  // Throws InvalidInput unless p is an odd prime below 2^31.
  explicit PrimeField(std::uint32_t p = kDefaultPrime);

  std::uint32_t characteristic() const noexcept { return p_; }

  Residue reduce(std::int64_t v) const noexcept {
    std::int64_t r = v % static_cast<std::int64_t>(p_);
    return static_cast<Residue>(r < 0 ? r + p_ : r);
  }
  Residue add(Residue a, Residue b) const noexcept {
    Residue s = a + b;
    return s >= p_ ? s - p_ : s;
  }
  Residue sub(Residue a, Residue b) const noexcept { return a >= b ? a - b : a + p_ - b; }
  Residue neg(Residue a) const noexcept { return a == 0 ? 0 : p_ - a; }
  Residue mul(Residue a, Residue b) const noexcept {
    return static_cast<Residue>((static_cast<std::uint64_t>(a) * b) % p_);
  }
  // a - f*b
  Residue sub_mul(Residue a, Residue f, Residue b) const noexcept {
    return sub(a, mul(f, b));
  }
  Residue pow(Residue a, std::uint64_t e) const noexcept;
  // Throws InvalidInput on zero.
  Residue inv(Residue a) const;
  // Representative in (-p/2, p/2].
  std::int64_t centered(Residue a) const noexcept {
    return a > p_ / 2 ? static_cast<std::int64_t>(a) - p_ : static_cast<std::int64_t>(a);
  }

  bool operator==(const PrimeField&) const = default;

 private:
  std::uint32_t p_;
};

bool is_prime(std::uint64_t p);

// v <- v - f * w over the index range [from, end).
void axpy_sub(const PrimeField& field, std::span<Residue> v, Residue f,
              std::span<const Residue> w, std::size_t from = 0);

class ExactMatrix {
 public:
  ExactMatrix(PrimeField field, std::size_t rows, std::size_t cols);
  static ExactMatrix identity(PrimeField field, std::size_t n);

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  const PrimeField& field() const noexcept { return field_; }

  Residue at(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }
  void set(std::size_t r, std::size_t c, Residue v) { data_[r * cols_ + c] = v; }
  std::span<Residue> row(std::size_t r) { return {data_.data() + r * cols_, cols_}; }
  std::span<const Residue> row(std::size_t r) const { return {data_.data() + r * cols_, cols_}; }

  ExactMatrix transposed() const;
  Vector apply(std::span<const Residue> v) const;
  ExactMatrix operator*(const ExactMatrix& other) const;
  bool is_zero() const;
  bool operator==(const ExactMatrix& other) const = default;

 private:
  PrimeField field_;
  std::size_t rows_;
  std::size_t cols_;
  std::vector<Residue> data_;
};

struct EchelonForm {
  ExactMatrix reduced;  // reduced row echelon form
  std::vector<std::size_t> pivot_columns;
};

// Pivot in each column is the first row (top to bottom) with a nonzero entry.
EchelonForm row_echelon(ExactMatrix m);
std::size_t rank(const ExactMatrix& m);
// Same rank computed by eliminating columns; used as a cross-check.
std::size_t rank_by_columns(const ExactMatrix& m);
std::vector<Vector> kernel_basis(const ExactMatrix& m);
std::optional<Vector> solve(const ExactMatrix& m, std::span<const Residue> rhs);
// Throws InconsistentSystem instead of returning nullopt.
Vector solve_or_throw(const ExactMatrix& m, std::span<const Residue> rhs);
// Indices of a maximal set of independent columns (the pivot columns).
std::vector<std::size_t> image_basis(const ExactMatrix& m);

// Incrementally built subspace of GF(p)^dim in semi-echelon form: row k has
// zeros at the pivots of all earlier rows.
class EchelonBasis {
 public:
  EchelonBasis(PrimeField field, std::size_t dim);

  std::size_t ambient_dimension() const noexcept { return dim_; }
  std::size_t rank() const noexcept { return rows_.size(); }
  const PrimeField& field() const noexcept { return field_; }

  void reduce(std::span<Residue> v) const;
  bool contains(std::span<const Residue> v) const;
  // Returns true when v was independent of the current span.
  bool insert(Vector v);
  const Vector& basis_vector(std::size_t k) const { return rows_[k]; }
  std::size_t pivot(std::size_t k) const { return pivots_[k]; }

 private:
  PrimeField field_;
  std::size_t dim_;
  std::vector<Vector> rows_;
  std::vector<std::size_t> pivots_;
};

}  // namespace detstrata
