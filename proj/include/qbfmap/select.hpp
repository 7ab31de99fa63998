#pragma once

#include "qbfmap/cnf.hpp"

#include <span>

namespace qbfmap {

/// One n:1 configurable mux: for each code v < n the clauses force
/// out <-> pool[v] whenever the selector bits spell v; codes >= n are ruled
/// out by blocking clauses.  Selector bit 0 is the least significant.
/// A single-candidate pool needs no bits and equates out with pool[0].
void encode_cmux(std::span<const int> pool_vars, int out_var,
                 std::span<const int> bit_vars, ClauseSet& out);

/// k independent full-pool muxes; bit_vars holds k groups of ceil(log2 n)
/// selector bits, group j feeding output j.
void encode_naive_cmux(std::span<const int> pool_vars, std::span<const int> out_vars,
                       std::span<const int> bit_vars, ClauseSet& out);

/// Like the naive form, but output j draws only from the first n - j pool
/// entries, so group j has ceil(log2(n - j)) bits.
void encode_shrinking_cmux(std::span<const int> pool_vars, std::span<const int> out_vars,
                           std::span<const int> bit_vars, ClauseSet& out);

/// One selector over all k outputs: code v names the v-th k-subset of the
/// pool in lexicographic order, and the outputs receive that subset in
/// ascending pool order.  Needs ceil(log2(C(n,k))) bits; codes >= C(n,k)
/// are blocked.
void encode_choose(std::span<const int> pool_vars, std::span<const int> out_vars,
                   std::span<const int> bit_vars, ClauseSet& out);

} // namespace qbfmap
