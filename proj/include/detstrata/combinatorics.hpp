#pragma once

#include <cstddef>
#include <vector>

namespace detstrata {

// Calls fn(indices) for every strictly increasing k-tuple in [0, n), in
// lexicographic order.
template <class Fn>
void for_each_subset(std::size_t n, std::size_t k, Fn&& fn) {
  if (k > n) return;
  std::vector<std::size_t> idx(k);
  for (std::size_t i = 0; i < k; ++i) idx[i] = i;
  while (true) {
    fn(static_cast<const std::vector<std::size_t>&>(idx));
    std::size_t i = k;
    while (i > 0 && idx[i - 1] == n - k + i - 1) --i;
    if (i == 0) return;
    ++idx[i - 1];
    for (std::size_t j = i; j < k; ++j) idx[j] = idx[j - 1] + 1;
  }
}

// Weakly increasing k-tuples in [0, n), lexicographic.
template <class Fn>
void for_each_multiset(std::size_t n, std::size_t k, Fn&& fn) {
  if (n == 0 && k > 0) return;
  std::vector<std::size_t> idx(k, 0);
  while (true) {
    fn(static_cast<const std::vector<std::size_t>&>(idx));
    std::size_t i = k;
    while (i > 0 && idx[i - 1] == n - 1) --i;
    if (i == 0) return;
    ++idx[i - 1];
    for (std::size_t j = i; j < k; ++j) idx[j] = idx[i - 1];
  }
}

}  // namespace detstrata
