#include "detstrata/arith.hpp"

#include <string>

#include "detstrata/errors.hpp"

namespace detstrata {

bool is_prime(std::uint64_t p) {
  if (p < 2) return false;
  for (std::uint64_t d = 2; d * d <= p; ++d)
    if (p % d == 0) return false;
  return true;
}

PrimeField::PrimeField(std::uint32_t p) : p_(p) {
  if (p < 3 || p >= (1u << 31) || !is_prime(p))
    throw InvalidInput("field characteristic must be an odd prime below 2^31, got " +
                       std::to_string(p));
}

Residue PrimeField::pow(Residue a, std::uint64_t e) const noexcept {
  Residue result = 1 % p_;
  Residue base = a;
  while (e) {
    if (e & 1) result = mul(result, base);
    base = mul(base, base);
    e >>= 1;
  }
  return result;
}

Residue PrimeField::inv(Residue a) const {
  if (a % p_ == 0) throw InvalidInput("inverse of zero");
  return pow(a, p_ - 2);
}

void axpy_sub(const PrimeField& field, std::span<Residue> v, Residue f,
              std::span<const Residue> w, std::size_t from) {
  if (f == 0) return;
  const std::uint32_t p = field.characteristic();
  const std::uint32_t g = p - f;  // v - f*w == v + g*w
  const std::size_t end = v.size();
  if (p < 46341) {
    // p + p^2 < 2^31, so the update fits in 32 bits.
    for (std::size_t i = from; i < end; ++i) {
      if (w[i] == 0) continue;
      v[i] = (v[i] + g * w[i]) % p;
    }
  } else {
    for (std::size_t i = from; i < end; ++i) {
      if (w[i] == 0) continue;
      v[i] = static_cast<Residue>((v[i] + static_cast<std::uint64_t>(g) * w[i]) % p);
    }
  }
}

ExactMatrix::ExactMatrix(PrimeField field, std::size_t rows, std::size_t cols)
    : field_(field), rows_(rows), cols_(cols), data_(rows * cols, 0) {}

ExactMatrix ExactMatrix::identity(PrimeField field, std::size_t n) {
  ExactMatrix m(field, n, n);
  for (std::size_t i = 0; i < n; ++i) m.set(i, i, 1);
  return m;
}

ExactMatrix ExactMatrix::transposed() const {
  ExactMatrix t(field_, cols_, rows_);
  for (std::size_t r = 0; r < rows_; ++r)
    for (std::size_t c = 0; c < cols_; ++c) t.set(c, r, at(r, c));
  return t;
}

Vector ExactMatrix::apply(std::span<const Residue> v) const {
  if (v.size() != cols_) throw InvalidInput("matrix-vector size mismatch");
  Vector out(rows_, 0);
  for (std::size_t r = 0; r < rows_; ++r) {
    std::uint64_t acc = 0;
    for (std::size_t c = 0; c < cols_; ++c) {
      acc += static_cast<std::uint64_t>(at(r, c)) * v[c];
      if ((c & 63) == 63) acc %= field_.characteristic();
    }
    out[r] = static_cast<Residue>(acc % field_.characteristic());
  }
  return out;
}

ExactMatrix ExactMatrix::operator*(const ExactMatrix& other) const {
  if (cols_ != other.rows_) throw InvalidInput("matrix product size mismatch");
  ExactMatrix out(field_, rows_, other.cols_);
  for (std::size_t r = 0; r < rows_; ++r)
    for (std::size_t k = 0; k < cols_; ++k) {
      Residue a = at(r, k);
      if (a) axpy_sub(field_, out.row(r), field_.neg(a), other.row(k));
    }
  return out;
}

bool ExactMatrix::is_zero() const {
  for (Residue v : data_)
    if (v) return false;
  return true;
}

EchelonForm row_echelon(ExactMatrix m) {
  const PrimeField& f = m.field();
  std::vector<std::size_t> pivots;
  std::size_t prow = 0;
  for (std::size_t c = 0; c < m.cols() && prow < m.rows(); ++c) {
    std::size_t r = prow;
    while (r < m.rows() && m.at(r, c) == 0) ++r;
    if (r == m.rows()) continue;
    if (r != prow) {
      auto a = m.row(r);
      auto b = m.row(prow);
      for (std::size_t k = c; k < m.cols(); ++k) std::swap(a[k], b[k]);
    }
    auto pr = m.row(prow);
    Residue inv = f.inv(pr[c]);
    for (std::size_t k = c; k < m.cols(); ++k) pr[k] = f.mul(pr[k], inv);
    for (std::size_t r2 = 0; r2 < m.rows(); ++r2) {
      if (r2 == prow) continue;
      Residue factor = m.at(r2, c);
      if (factor) axpy_sub(f, m.row(r2), factor, m.row(prow), c);
    }
    pivots.push_back(c);
    ++prow;
  }
  return {std::move(m), std::move(pivots)};
}

std::size_t rank(const ExactMatrix& m) {
  // Forward elimination only; no need for the reduced form.
  ExactMatrix w = m;
  const PrimeField& f = w.field();
  std::size_t prow = 0;
  for (std::size_t c = 0; c < w.cols() && prow < w.rows(); ++c) {
    std::size_t r = prow;
    while (r < w.rows() && w.at(r, c) == 0) ++r;
    if (r == w.rows()) continue;
    if (r != prow) {
      auto a = w.row(r);
      auto b = w.row(prow);
      for (std::size_t k = c; k < w.cols(); ++k) std::swap(a[k], b[k]);
    }
    Residue inv = f.inv(w.at(prow, c));
    for (std::size_t r2 = prow + 1; r2 < w.rows(); ++r2) {
      Residue entry = w.at(r2, c);
      if (entry) axpy_sub(f, w.row(r2), f.mul(entry, inv), w.row(prow), c);
    }
    ++prow;
  }
  return prow;
}

std::size_t rank_by_columns(const ExactMatrix& m) {
  EchelonBasis basis(m.field(), m.rows());
  for (std::size_t c = m.cols(); c-- > 0;) {
    Vector col(m.rows());
    for (std::size_t r = 0; r < m.rows(); ++r) col[r] = m.at(r, c);
    basis.insert(std::move(col));
  }
  return basis.rank();
}

std::vector<Vector> kernel_basis(const ExactMatrix& m) {
  EchelonForm e = row_echelon(m);
  std::vector<char> is_pivot(m.cols(), 0);
  for (std::size_t c : e.pivot_columns) is_pivot[c] = 1;
  const PrimeField& f = m.field();
  std::vector<Vector> out;
  for (std::size_t free = 0; free < m.cols(); ++free) {
    if (is_pivot[free]) continue;
    Vector v(m.cols(), 0);
    v[free] = 1;
    for (std::size_t k = 0; k < e.pivot_columns.size(); ++k)
      v[e.pivot_columns[k]] = f.neg(e.reduced.at(k, free));
    out.push_back(std::move(v));
  }
  return out;
}

std::optional<Vector> solve(const ExactMatrix& m, std::span<const Residue> rhs) {
  if (rhs.size() != m.rows()) throw InvalidInput("solve: rhs length differs from row count");
  ExactMatrix aug(m.field(), m.rows(), m.cols() + 1);
  for (std::size_t r = 0; r < m.rows(); ++r) {
    for (std::size_t c = 0; c < m.cols(); ++c) aug.set(r, c, m.at(r, c));
    aug.set(r, m.cols(), rhs[r] % m.field().characteristic());
  }
  EchelonForm e = row_echelon(std::move(aug));
  if (!e.pivot_columns.empty() && e.pivot_columns.back() == m.cols()) return std::nullopt;
  Vector x(m.cols(), 0);
  for (std::size_t k = 0; k < e.pivot_columns.size(); ++k)
    x[e.pivot_columns[k]] = e.reduced.at(k, m.cols());
  return x;
}

Vector solve_or_throw(const ExactMatrix& m, std::span<const Residue> rhs) {
  auto x = solve(m, rhs);
  if (!x) throw InconsistentSystem();
  return *std::move(x);
}

std::vector<std::size_t> image_basis(const ExactMatrix& m) {
  return row_echelon(m).pivot_columns;
}

EchelonBasis::EchelonBasis(PrimeField field, std::size_t dim) : field_(field), dim_(dim) {}

void EchelonBasis::reduce(std::span<Residue> v) const {
  for (std::size_t k = 0; k < rows_.size(); ++k) {
    Residue c = v[pivots_[k]];
    if (c) axpy_sub(field_, v, c, rows_[k], pivots_[k]);
  }
}

bool EchelonBasis::contains(std::span<const Residue> v) const {
  Vector w(v.begin(), v.end());
  reduce(w);
  for (Residue x : w)
    if (x) return false;
  return true;
}

bool EchelonBasis::insert(Vector v) {
  if (v.size() != dim_) throw InvalidInput("EchelonBasis: dimension mismatch");
  reduce(v);
  std::size_t p = 0;
  while (p < dim_ && v[p] == 0) ++p;
  if (p == dim_) return false;
  Residue inv = field_.inv(v[p]);
  for (std::size_t k = p; k < dim_; ++k) v[k] = field_.mul(v[k], inv);
  rows_.push_back(std::move(v));
  pivots_.push_back(p);
  return true;
}

}  // namespace detstrata
