#pragma once

#include "qbfmap/model.hpp"

#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace qbfmap {

/// Literals are DIMACS-style signed ints: variable v > 0, negation -v.
using Lit = std::int32_t;

inline int lit_var(Lit l) { return l < 0 ? -l : l; }
inline bool lit_neg(Lit l) { return l < 0; }
inline Lit make_lit(int var, bool neg) { return neg ? -var : var; }

/// Clause storage in insertion order, flattened for locality.  Inserting a
/// clause merges duplicate literals and rejects tautologies (returns false);
/// empty clauses and zero literals are invalid arguments.
class ClauseSet {
public:
  bool add_clause(std::span<const Lit> lits);
  bool add_clause(std::initializer_list<Lit> lits) {
    return add_clause(std::span<const Lit>(lits.begin(), lits.size()));
  }

  std::size_t size() const { return bounds_.size() - 1; }
  bool empty() const { return size() == 0; }
  std::span<const Lit> clause(std::size_t i) const {
    return std::span<const Lit>(lits_.data() + bounds_[i], bounds_[i + 1] - bounds_[i]);
  }
  std::size_t literal_count() const { return lits_.size(); }
  std::size_t max_clause_length() const;

  int var_count() const { return var_count_; }
  /// Allocates a fresh variable.
  int new_var() { return ++var_count_; }
  /// Raises var_count to at least n.
  void reserve_vars(int n) {
    if (n > var_count_) var_count_ = n;
  }

  /// True when every clause holds under the total assignment
  /// (values[v] != 0 means variable v is true; index 0 unused).
  bool satisfied_by(std::span<const std::uint8_t> values) const;

private:
  std::vector<Lit> lits_;
  std::vector<std::uint32_t> bounds_ = {0};
  int var_count_ = 0;
};

enum class VarRole { config, input, node };

const char* to_string(VarRole r);

/// What a problem variable stands for.  Tseitin auxiliaries keep signal == -1
/// and an empty name; everything else maps back to a model signal.
struct VarInfo {
  VarRole role = VarRole::node;
  int signal = -1;
  std::string name;
};

/// Prenex-CNF problem with the exists(config) forall(input) exists(node)
/// prefix.  Block vectors give quantifier order; `symbols[v - 1]` describes
/// variable v.
struct QbfProblem {
  ClauseSet matrix;
  std::vector<int> config_vars;
  std::vector<int> input_vars;
  std::vector<int> node_vars;
  std::vector<VarInfo> symbols;

  int var_count() const { return matrix.var_count(); }
  const VarInfo& info(int var) const { return symbols.at(static_cast<std::size_t>(var - 1)); }

  /// Checks prefix invariants: blocks disjoint, within range, jointly
  /// covering every variable that occurs in the matrix, roles consistent.
  void validate() const;
};

/// Per-model bookkeeping when lowering a CircuitModel: signal id -> variable.
class VarMap {
public:
  explicit VarMap(std::size_t signal_count) : var_(signal_count, 0) {}
  void bind(int signal, int var) { var_.at(static_cast<std::size_t>(signal)) = var; }
  int operator[](int signal) const {
    const int v = var_.at(static_cast<std::size_t>(signal));
    if (v == 0)
      throw std::out_of_range("signal has no variable");
    return v;
  }

private:
  std::vector<int> var_;
};

/// LUT read relation: for each input minterm m, (inputs = m) -> (out <-> t_m).
/// Two clauses of k + 2 literals per minterm.
void encode_lut(const Primitive& lut, const VarMap& vars, ClauseSet& out);

/// muxcy (out = sel ? ci : di, 6 clauses) and xorcy (out = a ^ b, 4 clauses).
void encode_carry_cell(const Primitive& prim, const VarMap& vars, ClauseSet& out);

/// Constrains output_vars to f(input_vars).  The adder form instantiates a
/// reference ripple-carry network over fresh auxiliary variables allocated
/// from `out`; the truth-table form emits per-minterm implications.
void encode_target_function(const TargetFunction& f, std::span<const int> input_vars,
                            std::span<const int> output_vars, ClauseSet& out);

/// Lowers the whole mapping problem: allocates variables block-wise (config,
/// input, then nodes/constants/auxiliaries), encodes every primitive and the
/// target function, and pins const0/const1 with unit clauses.  The circuit
/// outputs share variables with the target outputs, so no equality clauses
/// are emitted.  Deterministic: identical models yield identical problems.
QbfProblem assemble(const CircuitModel& model, const TargetFunction& f);

} // namespace qbfmap
