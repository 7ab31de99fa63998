#pragma once

#include <cstdint>
#include <stdexcept>
#include <vector>

namespace qbfmap {

/// Smallest b with 2^b >= n.  ceil_log2(1) == 0.
inline int ceil_log2(std::uint64_t n) {
  if (n == 0)
    throw std::invalid_argument("ceil_log2: n must be positive");
  int b = 0;
  while ((std::uint64_t{1} << b) < n)
    ++b;
  return b;
}

/// Binomial coefficient C(n, k).  Throws on overflow instead of wrapping;
/// pool sizes in this tool stay far below the limit.
inline std::uint64_t binomial(int n, int k) {
  if (n < 0 || k < 0)
    throw std::invalid_argument("binomial: negative argument");
  if (k > n)
    return 0;
  if (k > n - k)
    k = n - k;
  std::uint64_t r = 1;
  for (int i = 1; i <= k; ++i) {
    std::uint64_t num = static_cast<std::uint64_t>(n - k + i);
    if (r > UINT64_MAX / num)
      throw std::overflow_error("binomial: result does not fit 64 bits");
    r = r * num / i;
  }
  return r;
}

/// Rank of a strictly ascending k-index combination drawn from [0, n) in the
/// lexicographic enumeration of all such combinations.
inline std::uint64_t combination_rank(const std::vector<int>& comb, int n) {
  std::uint64_t rank = 0;
  int prev = -1;
  const int k = static_cast<int>(comb.size());
  for (int j = 0; j < k; ++j) {
    const int ij = comb[j];
    if (ij <= prev || ij >= n)
      throw std::invalid_argument("combination_rank: indices not ascending in [0,n)");
    for (int cand = prev + 1; cand < ij; ++cand)
      rank += binomial(n - cand - 1, k - j - 1);
    prev = ij;
  }
  return rank;
}

/// Inverse of combination_rank: the combination at position `rank` in
/// lexicographic order.
inline std::vector<int> combination_unrank(std::uint64_t rank, int n, int k) {
  if (k < 0 || k > n)
    throw std::invalid_argument("combination_unrank: need 0 <= k <= n");
  if (rank >= binomial(n, k))
    throw std::invalid_argument("combination_unrank: rank out of range");
  std::vector<int> comb(static_cast<std::size_t>(k));
  int start = 0;
  for (int j = 0; j < k; ++j) {
    for (int cand = start;; ++cand) {
      const std::uint64_t below = binomial(n - cand - 1, k - j - 1);
      if (rank < below) {
        comb[static_cast<std::size_t>(j)] = cand;
        start = cand + 1;
        break;
      }
      rank -= below;
    }
  }
  return comb;
}

} // namespace qbfmap
