#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

namespace qbfmap {

/// Role of a single-bit wire in the circuit model.
enum class SignalKind { config, input, node, const0, const1 };

const char* to_string(SignalKind k);

struct Signal {
  int id = -1;
  std::string name;
  SignalKind kind = SignalKind::node;
};

enum class PrimitiveKind { lut, cmux, choose, muxcy, xorcy };

const char* to_string(PrimitiveKind k);

/// A configurable (or fixed-function) primitive instance.  All references are
/// signal ids.  `inputs` is the data-input list; for cmux/choose it is the
/// candidate pool in selection order.  `config` lists the CONFIG signals that
/// parameterize the instance: the truth table of a LUT (bit m = output at
/// input minterm m) or the binary selector code (slot 0 = least significant).
struct Primitive {
  PrimitiveKind kind = PrimitiveKind::lut;
  std::vector<int> inputs;
  std::vector<int> config;
  std::vector<int> outputs;
};

/// The three ways of wiring LUT inputs to the candidate pool.
enum class SelectionEncoding { naive_cmux, shrinking_cmux, choose };

const char* to_string(SelectionEncoding e);
SelectionEncoding selection_encoding_from_string(const std::string& s);

/// A combinational network of configurable primitives.  Signal ids are dense
/// indices into `signals`.  Immutable once built and validated.
struct CircuitModel {
  std::vector<Signal> signals;
  std::vector<Primitive> primitives;
  std::vector<int> input_word; ///< INPUT signals in word order (x vector)
  std::vector<int> outputs;    ///< NODE signals in output order (y vector)

  int add_signal(SignalKind kind, std::string name);
  const Signal& signal(int id) const { return signals.at(static_cast<std::size_t>(id)); }

  int count_kind(SignalKind k) const;
  int config_count() const { return count_kind(SignalKind::config); }

  /// Index of the primitive driving each NODE signal, -1 elsewhere.
  std::vector<int> driver_map() const;

  /// Checks all structural invariants (dense ids, single drivers, arities,
  /// acyclicity).  Throws std::invalid_argument describing the first failure.
  void validate() const;
};

/// Semantic specification of the function the circuit must implement.
struct TargetFunction {
  enum class Kind { adder, truth_table };

  Kind kind = Kind::adder;
  int width = 0;         ///< adder: operand width w
  bool carry_out = true; ///< adder: expose the final carry as output bit w
  int inputs = 0;
  int outputs = 0;
  std::vector<std::uint64_t> table; ///< truth_table: 2^inputs rows, bit j = output j

  static TargetFunction adder(int width, bool carry_out = true);
  static TargetFunction truth_table(int inputs, int outputs, std::vector<std::uint64_t> rows);

  int arity_in() const { return inputs; }
  int arity_out() const { return outputs; }

  /// Evaluate on a packed input word (bit i = input i); returns packed outputs.
  std::uint64_t eval(std::uint64_t x) const;
};

/// Total assignment to the CONFIG signals of one model, keyed by signal id.
struct Configuration {
  std::map<int, bool> bits;

  bool bit(int signal_id) const;
  bool covers(const CircuitModel& model) const;
};

/// Number of configuration bits one selector needs to pick k of n pool
/// signals under the given encoding.
int config_bit_count(SelectionEncoding enc, int n, int k);

/// Builds the ripple-carry target structure: per result bit one LUT whose
/// inputs are selected from the pool {0, 1, a0..a(w-1), b0..b(w-1)}, a carry
/// mux c[i+1] = lut ? c[i] : di (di from its own 1-of-n selector), and a sum
/// xor y[i] = lut ^ c[i].  The initial carry is selected from {0, 1} by one
/// config bit.  Outputs are y0..y(w-1), plus c[w] when carry_out is set.
CircuitModel build_carry_chain_adder(int width, SelectionEncoding enc,
                                     int lut_arity = 6, bool carry_out = true);

} // namespace qbfmap
