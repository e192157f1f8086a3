#include "detstrata/poly.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <deque>
#include <mutex>
#include <sstream>

#include "detstrata/errors.hpp"

namespace detstrata {

namespace {

constexpr int kBinomRows = kMaxIndexedDegree + static_cast<int>(kMaxVariables) + 2;

struct BinomialTable {
  std::uint64_t c[kBinomRows][kMaxVariables + 1]{};
  BinomialTable() {
    for (int nn = 0; nn < kBinomRows; ++nn) {
      c[nn][0] = 1;
      for (std::size_t k = 1; k <= kMaxVariables; ++k)
        c[nn][k] = nn == 0 ? 0 : c[nn - 1][k - 1] + c[nn - 1][k];
    }
  }
};

const BinomialTable& binomials() {
  static const BinomialTable table;
  return table;
}

}  // namespace

int Monomial::last_variable() const noexcept {
  for (int v = static_cast<int>(kMaxVariables) - 1; v >= 0; --v)
    if (exps_[v]) return v;
  return -1;
}

Monomial Monomial::from_exponents(std::span<const int> exponents) {
  if (exponents.size() > kMaxVariables) throw InvalidInput("too many variables");
  Monomial m;
  int deg = 0;
  for (std::size_t v = 0; v < exponents.size(); ++v) {
    if (exponents[v] < 0 || exponents[v] > kMaxExponent)
      throw InvalidInput("exponent out of range");
    m.exps_[v] = static_cast<std::uint8_t>(exponents[v]);
    deg += exponents[v];
  }
  if (deg > 65535) throw InvalidInput("monomial degree out of range");
  m.degree_ = static_cast<std::uint16_t>(deg);
  return m;
}

Monomial Monomial::variable(std::size_t v) {
  if (v >= kMaxVariables) throw InvalidInput("variable index out of range");
  Monomial m;
  m.exps_[v] = 1;
  m.degree_ = 1;
  return m;
}

Monomial Monomial::operator*(const Monomial& other) const {
  Monomial m;
  for (std::size_t v = 0; v < kMaxVariables; ++v) {
    int e = exps_[v] + other.exps_[v];
    if (e > kMaxExponent) throw InvalidInput("exponent overflow");
    m.exps_[v] = static_cast<std::uint8_t>(e);
  }
  m.degree_ = static_cast<std::uint16_t>(degree_ + other.degree_);
  return m;
}

bool Monomial::divides(const Monomial& other) const noexcept {
  if (degree_ > other.degree_) return false;
  for (std::size_t v = 0; v < kMaxVariables; ++v)
    if (exps_[v] > other.exps_[v]) return false;
  return true;
}

Monomial Monomial::divided_by(const Monomial& divisor) const noexcept {
  Monomial m;
  for (std::size_t v = 0; v < kMaxVariables; ++v)
    m.exps_[v] = static_cast<std::uint8_t>(exps_[v] - divisor.exps_[v]);
  m.degree_ = static_cast<std::uint16_t>(degree_ - divisor.degree_);
  return m;
}

Monomial Monomial::lcm(const Monomial& other) const noexcept {
  Monomial m;
  int deg = 0;
  for (std::size_t v = 0; v < kMaxVariables; ++v) {
    m.exps_[v] = std::max(exps_[v], other.exps_[v]);
    deg += m.exps_[v];
  }
  m.degree_ = static_cast<std::uint16_t>(deg);
  return m;
}

bool Monomial::coprime(const Monomial& other) const noexcept {
  for (std::size_t v = 0; v < kMaxVariables; ++v)
    if (exps_[v] && other.exps_[v]) return false;
  return true;
}

std::strong_ordering grevlex(const Monomial& a, const Monomial& b) noexcept {
  if (a.degree() != b.degree()) return a.degree() <=> b.degree();
  for (int v = static_cast<int>(kMaxVariables) - 1; v >= 0; --v) {
    int ea = a.exponent(v), eb = b.exponent(v);
    if (ea != eb) return eb <=> ea;  // smaller exponent on the last variable wins
  }
  return std::strong_ordering::equal;
}

bool Polynomial::is_homogeneous() const noexcept {
  for (const Term& t : terms_)
    if (t.monomial.degree() != terms_.front().monomial.degree()) return false;
  return true;
}

Polynomial Polynomial::from_sorted_terms(std::vector<Term> terms) {
  Polynomial f;
  f.terms_ = std::move(terms);
  return f;
}

std::uint64_t graded_piece_dimension(int d, int n) {
  if (d < 0 || n < 0) return 0;
  // C(d+n, n) by the multiplicative formula; exact at every step.
  unsigned __int128 r = 1;
  for (int k = 1; k <= n; ++k) r = r * static_cast<unsigned>(d + k) / static_cast<unsigned>(k);
  if (r > UINT64_MAX) throw InvalidInput("graded piece dimension overflow");
  return static_cast<std::uint64_t>(r);
}

// Lazily filled per-degree monomial lists, sorted descending in grevlex.
class MonomialTable {
 public:
  explicit MonomialTable(std::size_t nvars) : nvars_(nvars) {}

  const std::vector<Monomial>& degree(int d) {
    std::lock_guard<std::mutex> lock(mu_);
    while (static_cast<int>(levels_.size()) <= d) levels_.push_back(build(static_cast<int>(levels_.size())));
    return levels_[d];
  }

  // Rank of m among the monomials of its degree in descending grevlex order.
  std::size_t index(const Monomial& m) const noexcept {
    const auto& b = binomials().c;
    std::size_t rank = 0;
    int remaining = m.degree();
    for (int v = static_cast<int>(nvars_) - 1; v >= 1; --v) {
      int e = m.exponent(v);
      // monomials agreeing above v with a smaller exponent at v come first
      rank += b[remaining + v][v] - b[remaining - e + v][v];
      remaining -= e;
    }
    return rank;
  }

 private:
  std::vector<Monomial> build(int d) const {
    if (d > kMaxIndexedDegree) throw InvalidInput("degree too large to index");
    std::vector<Monomial> out;
    std::vector<int> exps(nvars_, 0);
    // enumerate compositions of d into nvars_ parts
    auto rec = [&](auto&& self, std::size_t v, int left) -> void {
      if (v + 1 == nvars_) {
        exps[v] = left;
        out.push_back(Monomial::from_exponents(exps));
        return;
      }
      for (int e = left; e >= 0; --e) {
        exps[v] = e;
        self(self, v + 1, left - e);
      }
    };
    rec(rec, 0, d);
    std::sort(out.begin(), out.end(), MonomialGreater{});
    return out;
  }

  std::size_t nvars_;
  std::mutex mu_;
  std::deque<std::vector<Monomial>> levels_;
};

PolyRing::PolyRing(std::size_t num_variables, PrimeField field)
    : nvars_(num_variables), field_(field) {
  if (num_variables == 0 || num_variables > kMaxVariables)
    throw InvalidInput("number of variables must be between 1 and 16");
  table_ = std::make_shared<MonomialTable>(num_variables);
}

Polynomial PolyRing::constant(std::int64_t c) const {
  Residue r = field_.reduce(c);
  if (!r) return {};
  return Polynomial::from_sorted_terms({{Monomial{}, r}});
}

Polynomial PolyRing::variable(std::size_t v) const {
  if (v >= nvars_) throw InvalidInput("variable index out of range");
  return Polynomial::from_sorted_terms({{Monomial::variable(v), 1}});
}

Polynomial PolyRing::term(const Monomial& m, Residue c) const {
  c %= field_.characteristic();
  if (!c) return {};
  return Polynomial::from_sorted_terms({{m, c}});
}

Polynomial PolyRing::normalize(std::vector<Term> terms) const {
  std::sort(terms.begin(), terms.end(), [](const Term& x, const Term& y) {
    return grevlex(x.monomial, y.monomial) == std::strong_ordering::greater;
  });
  std::vector<Term> out;
  for (const Term& t : terms) {
    if (!out.empty() && out.back().monomial == t.monomial)
      out.back().coefficient = field_.add(out.back().coefficient, t.coefficient % field_.characteristic());
    else
      out.push_back({t.monomial, t.coefficient % field_.characteristic()});
  }
  std::erase_if(out, [](const Term& t) { return t.coefficient == 0; });
  return Polynomial::from_sorted_terms(std::move(out));
}

Polynomial PolyRing::add(const Polynomial& f, const Polynomial& g) const {
  const auto& a = f.terms();
  const auto& b = g.terms();
  std::vector<Term> out;
  out.reserve(a.size() + b.size());
  std::size_t i = 0, j = 0;
  while (i < a.size() || j < b.size()) {
    if (j == b.size()) {
      out.push_back(a[i++]);
    } else if (i == a.size()) {
      out.push_back(b[j++]);
    } else {
      auto cmp = grevlex(a[i].monomial, b[j].monomial);
      if (cmp == std::strong_ordering::greater) {
        out.push_back(a[i++]);
      } else if (cmp == std::strong_ordering::less) {
        out.push_back(b[j++]);
      } else {
        Residue s = field_.add(a[i].coefficient, b[j].coefficient);
        if (s) out.push_back({a[i].monomial, s});
        ++i;
        ++j;
      }
    }
  }
  return Polynomial::from_sorted_terms(std::move(out));
}

Polynomial PolyRing::negate(const Polynomial& f) const {
  std::vector<Term> out = f.terms();
  for (Term& t : out) t.coefficient = field_.neg(t.coefficient);
  return Polynomial::from_sorted_terms(std::move(out));
}

Polynomial PolyRing::subtract(const Polynomial& f, const Polynomial& g) const {
  return add(f, negate(g));
}

Polynomial PolyRing::scale(const Polynomial& f, Residue c) const {
  c %= field_.characteristic();
  if (!c) return {};
  std::vector<Term> out = f.terms();
  for (Term& t : out) t.coefficient = field_.mul(t.coefficient, c);
  return Polynomial::from_sorted_terms(std::move(out));
}

Polynomial PolyRing::multiply_term(const Polynomial& f, const Monomial& m, Residue c) const {
  c %= field_.characteristic();
  if (!c) return {};
  std::vector<Term> out;
  out.reserve(f.size());
  // multiplication by a monomial preserves the order
  for (const Term& t : f.terms()) out.push_back({t.monomial * m, field_.mul(t.coefficient, c)});
  return Polynomial::from_sorted_terms(std::move(out));
}

Polynomial PolyRing::multiply(const Polynomial& f, const Polynomial& g) const {
  if (f.is_zero() || g.is_zero()) return {};
  if (f.is_homogeneous() && g.is_homogeneous()) {
    int d = f.degree() + g.degree();
    if (d <= kMaxIndexedDegree) {
      std::vector<std::uint64_t> acc(piece_dimension(d), 0);
      const std::uint64_t p = field_.characteristic();
      for (const Term& s : f.terms())
        for (const Term& t : g.terms()) {
          std::size_t k = monomial_index(s.monomial * t.monomial);
          acc[k] = (acc[k] + static_cast<std::uint64_t>(s.coefficient) * t.coefficient) % p;
        }
      const auto& mons = monomials_of_degree(d);
      std::vector<Term> out;
      for (std::size_t k = 0; k < acc.size(); ++k)
        if (acc[k]) out.push_back({mons[k], static_cast<Residue>(acc[k])});
      return Polynomial::from_sorted_terms(std::move(out));
    }
  }
  std::vector<Term> prod;
  prod.reserve(f.size() * g.size());
  for (const Term& s : f.terms())
    for (const Term& t : g.terms())
      prod.push_back({s.monomial * t.monomial, field_.mul(s.coefficient, t.coefficient)});
  return normalize(std::move(prod));
}

const std::vector<Monomial>& PolyRing::monomials_of_degree(int d) const {
  static const std::vector<Monomial> empty;
  if (d < 0) return empty;
  return table_->degree(d);
}

std::size_t PolyRing::piece_dimension(int d) const {
  return static_cast<std::size_t>(graded_piece_dimension(d, n()));
}

std::size_t PolyRing::monomial_index(const Monomial& m) const noexcept { return table_->index(m); }

Vector PolyRing::dense(const Polynomial& f, int d) const {
  Vector v(piece_dimension(d), 0);
  for (const Term& t : f.terms()) {
    if (t.monomial.degree() != d) throw InvalidInput("dense: polynomial not homogeneous of the requested degree");
    v[monomial_index(t.monomial)] = t.coefficient;
  }
  return v;
}

Polynomial PolyRing::from_dense(int d, std::span<const Residue> coeffs) const {
  const auto& mons = monomials_of_degree(d);
  std::vector<Term> out;
  for (std::size_t k = 0; k < coeffs.size(); ++k)
    if (coeffs[k]) out.push_back({mons[k], coeffs[k]});
  return Polynomial::from_sorted_terms(std::move(out));
}

Residue PolyRing::random_residue(Rng& rng) const {
  return static_cast<Residue>(rng() % field_.characteristic());
}

Residue PolyRing::random_nonzero(Rng& rng) const {
  return static_cast<Residue>(1 + rng() % (field_.characteristic() - 1));
}

Polynomial PolyRing::random_homogeneous(int d, Rng& rng) const {
  if (d < 0) return {};
  if (d == 0) return term(Monomial{}, random_nonzero(rng));
  const auto& mons = monomials_of_degree(d);
  std::vector<Term> out;
  out.reserve(mons.size());
  for (const Monomial& m : mons) {
    Residue c = random_residue(rng);
    if (c) out.push_back({m, c});
  }
  return Polynomial::from_sorted_terms(std::move(out));
}

namespace {

class Parser {
 public:
  Parser(std::string_view s, const PolyRing& ring) : s_(s), ring_(ring) {}

  Polynomial run() {
    std::vector<Term> terms;
    skip();
    if (pos_ == s_.size()) throw InvalidInput("empty polynomial");
    bool first = true;
    while (pos_ < s_.size()) {
      bool negative = false;
      if (peek() == '+' || peek() == '-') {
        negative = peek() == '-';
        ++pos_;
        skip();
      } else if (!first) {
        fail("expected '+' or '-'");
      }
      Term t = term();
      if (negative) t.coefficient = ring_.field().neg(t.coefficient);
      if (t.coefficient) terms.push_back(t);
      first = false;
      skip();
    }
    return ring_.normalize(std::move(terms));
  }

 private:
  char peek() const { return pos_ < s_.size() ? s_[pos_] : '\0'; }
  void skip() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
  }
  [[noreturn]] void fail(const std::string& why) const {
    throw InvalidInput("cannot parse polynomial '" + std::string(s_) + "' at offset " +
                       std::to_string(pos_) + ": " + why);
  }
  std::int64_t number() {
    std::int64_t v = 0;
    auto [ptr, ec] = std::from_chars(s_.data() + pos_, s_.data() + s_.size(), v);
    if (ec != std::errc()) fail("expected a number");
    pos_ = static_cast<std::size_t>(ptr - s_.data());
    return v;
  }

  Term term() {
    const PrimeField& f = ring_.field();
    Residue coeff = 1;
    std::vector<int> exps(ring_.num_variables(), 0);
    bool any = false;
    while (true) {
      skip();
      if (std::isdigit(static_cast<unsigned char>(peek()))) {
        coeff = f.mul(coeff, f.reduce(number()));
      } else if (peek() == 'x') {
        ++pos_;
        if (!std::isdigit(static_cast<unsigned char>(peek()))) fail("expected variable index");
        std::int64_t v = number();
        if (v < 0 || static_cast<std::size_t>(v) >= ring_.num_variables())
          fail("variable x" + std::to_string(v) + " not in the ring");
        std::int64_t e = 1;
        skip();
        if (peek() == '^') {
          ++pos_;
          skip();
          e = number();
          if (e < 0) fail("negative exponent");
        }
        exps[v] += static_cast<int>(e);
      } else {
        fail("expected a coefficient or variable");
      }
      any = true;
      skip();
      if (peek() == '*') {
        ++pos_;
        continue;
      }
      break;
    }
    if (!any) fail("empty term");
    return {Monomial::from_exponents(exps), coeff};
  }

  std::string_view s_;
  const PolyRing& ring_;
  std::size_t pos_ = 0;
};

}  // namespace

Polynomial PolyRing::parse(std::string_view text) const { return Parser(text, *this).run(); }

std::string format_monomial(const Monomial& m) {
  std::ostringstream os;
  bool first = true;
  for (std::size_t v = 0; v < kMaxVariables; ++v) {
    int e = m.exponent(v);
    if (!e) continue;
    if (!first) os << '*';
    os << 'x' << v;
    if (e > 1) os << '^' << e;
    first = false;
  }
  return first ? "1" : os.str();
}

std::string PolyRing::format(const Polynomial& f) const {
  if (f.is_zero()) return "0";
  std::ostringstream os;
  bool first = true;
  for (const Term& t : f.terms()) {
    std::int64_t c = field_.centered(t.coefficient);
    bool neg = c < 0;
    std::int64_t mag = neg ? -c : c;
    if (first)
      os << (neg ? "-" : "");
    else
      os << (neg ? " - " : " + ");
    bool unit_monomial = t.monomial.degree() == 0;
    if (mag != 1 || unit_monomial) {
      os << mag;
      if (!unit_monomial) os << '*';
    }
    if (!unit_monomial) os << format_monomial(t.monomial);
    first = false;
  }
  return os.str();
}

}  // namespace detstrata
