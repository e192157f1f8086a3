#include "detstrata/formulas.hpp"

#include <limits>
#include <numeric>

#include "detstrata/combinatorics.hpp"
#include "detstrata/errors.hpp"

namespace detstrata {

BigInt binomial(std::int64_t x, int n) {
  if (n < 0 || x < n) return 0;
  BigInt r = 1;
  for (int k = 1; k <= n; ++k) {
    r *= BigInt(x - n + k);
    r /= k;
  }
  return r;
}

std::int64_t to_int64(const BigInt& v) {
  if (v > std::numeric_limits<std::int64_t>::max() || v < std::numeric_limits<std::int64_t>::min())
    throw InvalidInput("integer result does not fit in 64 bits");
  return static_cast<std::int64_t>(v);
}

namespace {

BigInt pair_sum(const std::vector<int>& x, const std::vector<int>& y, int n) {
  BigInt s = 0;
  for (int u : x)
    for (int v : y) s += binomial(static_cast<std::int64_t>(u) - v + n, n);
  return s;
}

std::int64_t sum_b(const DegreeMatrixSpec& spec) { return std::accumulate(spec.b.begin(), spec.b.end(), 0LL); }

// ℓ_i for 3 <= i <= c
std::int64_t ell_at(const DegreeMatrixSpec& spec, int i) {
  std::int64_t s = 0;
  for (std::size_t j = 0; j <= spec.t() + static_cast<std::size_t>(i) - 2; ++j) s += spec.a.at(j);
  return s - sum_b(spec);
}

std::int64_t h_at(const DegreeMatrixSpec& spec, int i) {  // h_{i-3}
  return 2LL * spec.a.at(spec.t() + static_cast<std::size_t>(i) - 2) - ell_at(spec, i) + spec.n;
}

}  // namespace

std::int64_t lambda_c(const DegreeMatrixSpec& spec) {
  const int n = spec.n;
  BigInt v = pair_sum(spec.a, spec.b, n) + pair_sum(spec.b, spec.a, n) - pair_sum(spec.a, spec.a, n) -
             pair_sum(spec.b, spec.b, n) + 1;
  return to_int64(v);
}

std::vector<std::int64_t> ell_values(const DegreeMatrixSpec& spec) {
  std::vector<std::int64_t> out;
  for (int i = 3; i <= spec.c(); ++i) out.push_back(ell_at(spec, i));
  return out;
}

std::vector<std::int64_t> h_values(const DegreeMatrixSpec& spec) {
  std::vector<std::int64_t> out;
  for (int i = 3; i <= spec.c(); ++i) out.push_back(h_at(spec, i));
  return out;
}

std::vector<std::int64_t> K_values(const DegreeMatrixSpec& spec) {
  std::vector<std::int64_t> out;
  const std::size_t t = spec.t();
  for (int i = 0; i + 3 <= spec.c(); ++i) {
    const std::int64_t h = h_at(spec, i + 3);
    const std::size_t acount = t + static_cast<std::size_t>(i) + 1;  // a_0..a_{t+i}
    BigInt k = 0;
    for (int r = 0; r <= i; ++r) {
      const int s = i - r;
      const bool negative = s % 2 == 1;
      for_each_subset(acount, static_cast<std::size_t>(r), [&](const std::vector<std::size_t>& J) {
        std::int64_t sa = 0;
        for (std::size_t j : J) sa += spec.a[j];
        for_each_multiset(t, static_cast<std::size_t>(s), [&](const std::vector<std::size_t>& K) {
          std::int64_t sb = 0;
          for (std::size_t q : K) sb += spec.b[q];
          BigInt term = binomial(h + sa + sb, spec.n);
          if (negative)
            k -= term;
          else
            k += term;
        });
      });
    }
    out.push_back(to_int64(k));
  }
  return out;
}

std::int64_t lambda(const DegreeMatrixSpec& spec) {
  std::int64_t v = lambda_c(spec);
  for (std::int64_t k : K_values(spec)) v += k;
  return v;
}

AutB aut_B(const DegreeMatrixSpec& spec, bool hom_MM_verified) {
  AutB r;
  for (std::int64_t k : K_values(spec)) r.value += k;
  r.hom_MM_verified = hom_MM_verified;
  return r;
}

bool nonempty(const DegreeMatrixSpec& spec) {
  if (spec.a.size() < spec.b.size()) return false;
  bool strict = false;
  for (std::size_t i = 0; i < spec.t(); ++i) {
    if (spec.a[i] < spec.b[i]) return false;
    strict = strict || spec.a[i] > spec.b[i];
  }
  return strict;
}

std::int64_t lambda_quotient_c2(const std::function<std::int64_t(int)>& hilbert, const DegreeMatrixSpec& spec) {
  if (spec.c() != 2) throw InvalidInput("lambda_quotient_c2 needs c = 2");
  auto h = [&](int d) { return d < 0 ? 0 : hilbert(d); };
  std::int64_t s = 1;
  for (int aj : spec.a)
    for (int bi : spec.b) s += h(aj - bi) + h(bi - aj);
  for (int x : spec.a)
    for (int y : spec.a) s -= h(x - y);
  for (int x : spec.b)
    for (int y : spec.b) s -= h(x - y);
  return s;
}

std::int64_t dimension_via_hilbert(const GradedMatrix& m) {
  std::int64_t s = 1;
  for (int aj : m.spec().a) s += static_cast<std::int64_t>(hilbert_function_M(m, aj));
  for (int bi : m.spec().b) s -= static_cast<std::int64_t>(hilbert_function_M(m, bi));
  return s;
}

DimensionFormula dimension_formula(const DegreeMatrixSpec& spec) {
  if (!nonempty(spec)) throw EmptyStratum("W_s" + spec.to_text() + " is empty");
  StandardSample s = sample_standard(spec);
  if (!s.codim.standard) throw NotStandard("no standard sample for " + spec.to_text());
  return DimensionFormula{lambda(spec), dimension_via_hilbert(s.matrix)};
}

StratumInvariants stratum_invariants(const DegreeMatrixSpec& spec, const GradedMatrix* sample) {
  StratumInvariants inv;
  inv.lambda_c = lambda_c(spec);
  inv.K = K_values(spec);
  inv.ell = ell_values(spec);
  inv.h = h_values(spec);
  inv.lambda = lambda(spec);
  inv.nonempty = nonempty(spec);
  inv.aut_B = aut_B(spec);
  if (sample) inv.dim_via_HM = dimension_via_hilbert(*sample);
  return inv;
}

}  // namespace detstrata
