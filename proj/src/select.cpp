#include "qbfmap/select.hpp"

#include "qbfmap/combin.hpp"

#include <stdexcept>
#include <vector>

namespace qbfmap {

namespace {

/// Appends the literals falsified by "bits == v": one per selector bit,
/// negated where v has a 1.
void push_code_breakers(std::span<const int> bit_vars, std::uint64_t v,
                        std::vector<Lit>& scratch) {
  for (std::size_t i = 0; i < bit_vars.size(); ++i)
    scratch.push_back(make_lit(bit_vars[i], (v >> i) & 1u));
}

void equate(int a, int out, ClauseSet& cs) {
  cs.add_clause({-a, out});
  cs.add_clause({a, -out});
}

} // namespace

void encode_cmux(std::span<const int> pool_vars, int out_var,
                 std::span<const int> bit_vars, ClauseSet& out) {
  const std::size_t n = pool_vars.size();
  if (n == 0)
    throw std::invalid_argument("encode_cmux: empty pool");
  const int want_bits = ceil_log2(n);
  if (static_cast<int>(bit_vars.size()) != want_bits)
    throw std::invalid_argument("encode_cmux: selector width mismatch");

  if (n == 1) {
    equate(pool_vars[0], out_var, out);
    return;
  }
  std::vector<Lit> scratch;
  for (std::uint64_t v = 0; v < n; ++v) {
    scratch.clear();
    push_code_breakers(bit_vars, v, scratch);
    scratch.push_back(-pool_vars[static_cast<std::size_t>(v)]);
    scratch.push_back(out_var);
    out.add_clause(scratch);
    scratch[scratch.size() - 2] = pool_vars[static_cast<std::size_t>(v)];
    scratch.back() = -out_var;
    out.add_clause(scratch);
  }
  for (std::uint64_t v = n; v < (std::uint64_t{1} << want_bits); ++v) {
    scratch.clear();
    push_code_breakers(bit_vars, v, scratch);
    out.add_clause(scratch);
  }
}

void encode_naive_cmux(std::span<const int> pool_vars, std::span<const int> out_vars,
                       std::span<const int> bit_vars, ClauseSet& out) {
  const int b = ceil_log2(pool_vars.size());
  if (bit_vars.size() != out_vars.size() * static_cast<std::size_t>(b))
    throw std::invalid_argument("encode_naive_cmux: selector width mismatch");
  for (std::size_t j = 0; j < out_vars.size(); ++j)
    encode_cmux(pool_vars, out_vars[j],
                bit_vars.subspan(j * static_cast<std::size_t>(b),
                                 static_cast<std::size_t>(b)),
                out);
}

void encode_shrinking_cmux(std::span<const int> pool_vars, std::span<const int> out_vars,
                           std::span<const int> bit_vars, ClauseSet& out) {
  const std::size_t n = pool_vars.size();
  const std::size_t k = out_vars.size();
  if (k > n)
    throw std::invalid_argument("encode_shrinking_cmux: more outputs than pool entries");
  std::size_t offset = 0;
  for (std::size_t j = 0; j < k; ++j) {
    const std::size_t nj = n - j;
    const std::size_t bj = static_cast<std::size_t>(ceil_log2(nj));
    if (offset + bj > bit_vars.size())
      throw std::invalid_argument("encode_shrinking_cmux: selector width mismatch");
    encode_cmux(pool_vars.first(nj), out_vars[j], bit_vars.subspan(offset, bj), out);
    offset += bj;
  }
  if (offset != bit_vars.size())
    throw std::invalid_argument("encode_shrinking_cmux: selector width mismatch");
}

void encode_choose(std::span<const int> pool_vars, std::span<const int> out_vars,
                   std::span<const int> bit_vars, ClauseSet& out) {
  const int n = static_cast<int>(pool_vars.size());
  const int k = static_cast<int>(out_vars.size());
  if (k < 1 || k > n)
    throw std::invalid_argument("encode_choose: need 1 <= k <= pool size");
  const std::uint64_t count = binomial(n, k);
  const int want_bits = ceil_log2(count);
  if (static_cast<int>(bit_vars.size()) != want_bits)
    throw std::invalid_argument("encode_choose: selector width mismatch");

  if (want_bits == 0) { // exactly one subset: the whole pool, in order
    for (int j = 0; j < k; ++j)
      equate(pool_vars[static_cast<std::size_t>(j)],
             out_vars[static_cast<std::size_t>(j)], out);
    return;
  }

  // Walk the k-subsets in lexicographic order of their ascending index tuple.
  std::vector<int> comb(static_cast<std::size_t>(k));
  for (int j = 0; j < k; ++j)
    comb[static_cast<std::size_t>(j)] = j;
  std::vector<Lit> scratch;
  for (std::uint64_t v = 0; v < count; ++v) {
    for (int j = 0; j < k; ++j) {
      const int sel = pool_vars[static_cast<std::size_t>(comb[static_cast<std::size_t>(j)])];
      const int o = out_vars[static_cast<std::size_t>(j)];
      scratch.clear();
      push_code_breakers(bit_vars, v, scratch);
      scratch.push_back(-sel);
      scratch.push_back(o);
      out.add_clause(scratch);
      scratch[scratch.size() - 2] = sel;
      scratch.back() = -o;
      out.add_clause(scratch);
    }
    // advance to the next combination
    int j = k - 1;
    while (j >= 0 && comb[static_cast<std::size_t>(j)] == n - k + j)
      --j;
    if (j < 0)
      break;
    ++comb[static_cast<std::size_t>(j)];
    for (int t = j + 1; t < k; ++t)
      comb[static_cast<std::size_t>(t)] = comb[static_cast<std::size_t>(t - 1)] + 1;
  }
  for (std::uint64_t v = count; v < (std::uint64_t{1} << want_bits); ++v) {
    scratch.clear();
    push_code_breakers(bit_vars, v, scratch);
    out.add_clause(scratch);
  }
}

} // namespace qbfmap
