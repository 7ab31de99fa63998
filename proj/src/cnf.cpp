#include "qbfmap/cnf.hpp"

#include "qbfmap/select.hpp"

#include <algorithm>
#include <stdexcept>

namespace qbfmap {

bool ClauseSet::add_clause(std::span<const Lit> lits) {
  if (lits.empty())
    throw std::invalid_argument("empty clause");
  for (const Lit l : lits)
    if (l == 0)
      throw std::invalid_argument("literal 0 is not allowed");
  const std::size_t start = lits_.size();
  int max_var = var_count_;
  for (const Lit l : lits) {
    bool dup = false;
    for (std::size_t i = start; i < lits_.size(); ++i) {
      if (lits_[i] == l) {
        dup = true;
        break;
      }
      if (lits_[i] == -l) { // tautology
        lits_.resize(start);
        return false;
      }
    }
    if (!dup) {
      lits_.push_back(l);
      max_var = std::max(max_var, lit_var(l));
    }
  }
  var_count_ = max_var;
  bounds_.push_back(static_cast<std::uint32_t>(lits_.size()));
  return true;
}

std::size_t ClauseSet::max_clause_length() const {
  std::size_t m = 0;
  for (std::size_t i = 0; i + 1 < bounds_.size(); ++i)
    m = std::max(m, static_cast<std::size_t>(bounds_[i + 1] - bounds_[i]));
  return m;
}

bool ClauseSet::satisfied_by(std::span<const std::uint8_t> values) const {
  for (std::size_t i = 0; i < size(); ++i) {
    bool sat = false;
    for (const Lit l : clause(i)) {
      if ((values[static_cast<std::size_t>(lit_var(l))] != 0) != lit_neg(l)) {
        sat = true;
        break;
      }
    }
    if (!sat)
      return false;
  }
  return true;
}

const char* to_string(VarRole r) {
  switch (r) {
  case VarRole::config: return "c";
  case VarRole::input: return "x";
  case VarRole::node: return "n";
  }
  return "?";
}

void QbfProblem::validate() const {
  const int vc = var_count();
  if (static_cast<int>(symbols.size()) != vc)
    throw std::invalid_argument("symbol table size must equal variable count");

  std::vector<std::uint8_t> seen(static_cast<std::size_t>(vc) + 1, 0);
  const auto check_block = [&](const std::vector<int>& block, VarRole role) {
    for (const int v : block) {
      if (v < 1 || v > vc)
        throw std::invalid_argument("prefix variable out of range");
      if (seen[static_cast<std::size_t>(v)]++)
        throw std::invalid_argument("variable quantified twice");
      if (info(v).role != role)
        throw std::invalid_argument("symbol role disagrees with prefix block");
    }
  };
  check_block(config_vars, VarRole::config);
  check_block(input_vars, VarRole::input);
  check_block(node_vars, VarRole::node);

  for (std::size_t i = 0; i < matrix.size(); ++i)
    for (const Lit l : matrix.clause(i))
      if (!seen[static_cast<std::size_t>(lit_var(l))])
        throw std::invalid_argument("matrix variable " + std::to_string(lit_var(l)) +
                                    " is not quantified");
}

void encode_lut(const Primitive& lut, const VarMap& vars, ClauseSet& out) {
  if (lut.kind != PrimitiveKind::lut)
    throw std::invalid_argument("encode_lut: primitive is not a LUT");
  const int k = static_cast<int>(lut.inputs.size());
  const int o = vars[lut.outputs[0]];
  std::vector<Lit> scratch;
  for (std::uint32_t m = 0; m < (std::uint32_t{1} << k); ++m) {
    const int t = vars[lut.config[m]];
    scratch.clear();
    for (int j = 0; j < k; ++j)
      scratch.push_back(make_lit(vars[lut.inputs[static_cast<std::size_t>(j)]],
                                 (m >> j) & 1u));
    scratch.push_back(-t);
    scratch.push_back(o);
    out.add_clause(scratch);
    scratch[static_cast<std::size_t>(k)] = t;
    scratch[static_cast<std::size_t>(k) + 1] = -o;
    out.add_clause(scratch);
  }
}

void encode_carry_cell(const Primitive& prim, const VarMap& vars, ClauseSet& out) {
  if (prim.kind == PrimitiveKind::muxcy) {
    const int s = vars[prim.inputs[0]];
    const int ci = vars[prim.inputs[1]];
    const int di = vars[prim.inputs[2]];
    const int o = vars[prim.outputs[0]];
    out.add_clause({-s, -ci, o});
    out.add_clause({-s, ci, -o});
    out.add_clause({s, -di, o});
    out.add_clause({s, di, -o});
    out.add_clause({-ci, -di, o});
    out.add_clause({ci, di, -o});
  } else if (prim.kind == PrimitiveKind::xorcy) {
    const int a = vars[prim.inputs[0]];
    const int b = vars[prim.inputs[1]];
    const int o = vars[prim.outputs[0]];
    out.add_clause({-a, -b, -o});
    out.add_clause({a, b, -o});
    out.add_clause({a, -b, o});
    out.add_clause({-a, b, o});
  } else {
    throw std::invalid_argument("encode_carry_cell: primitive is not muxcy/xorcy");
  }
}

namespace {

void add_xor2(ClauseSet& cs, int x, int y, int z) {
  cs.add_clause({-x, -y, -z});
  cs.add_clause({x, y, -z});
  cs.add_clause({x, -y, z});
  cs.add_clause({-x, y, z});
}

void add_and2(ClauseSet& cs, int x, int y, int z) {
  cs.add_clause({-x, -y, z});
  cs.add_clause({x, -z});
  cs.add_clause({y, -z});
}

void add_or2(ClauseSet& cs, int x, int y, int z) {
  cs.add_clause({x, y, -z});
  cs.add_clause({-x, z});
  cs.add_clause({-y, z});
}

void encode_adder_reference(int w, bool co, std::span<const int> in,
                            std::span<const int> sum, ClauseSet& cs) {
  const auto a = [&](int i) { return in[static_cast<std::size_t>(i)]; };
  const auto b = [&](int i) { return in[static_cast<std::size_t>(w + i)]; };

  add_xor2(cs, a(0), b(0), sum[0]);
  if (w == 1) {
    if (co)
      add_and2(cs, a(0), b(0), sum[1]);
    return;
  }
  int carry = cs.new_var();
  add_and2(cs, a(0), b(0), carry);
  for (int i = 1; i < w; ++i) {
    const int t = cs.new_var();
    add_xor2(cs, a(i), b(i), t);
    add_xor2(cs, t, carry, sum[static_cast<std::size_t>(i)]);
    const bool last = i == w - 1;
    if (last && !co)
      break;
    const int g = cs.new_var();
    add_and2(cs, a(i), b(i), g);
    const int p = cs.new_var();
    add_and2(cs, t, carry, p);
    const int next = last ? sum[static_cast<std::size_t>(w)] : cs.new_var();
    add_or2(cs, g, p, next);
    carry = next;
  }
}

} // namespace

void encode_target_function(const TargetFunction& f, std::span<const int> input_vars,
                            std::span<const int> output_vars, ClauseSet& out) {
  if (static_cast<int>(input_vars.size()) != f.arity_in() ||
      static_cast<int>(output_vars.size()) != f.arity_out())
    throw std::invalid_argument("target function arity mismatch");

  if (f.kind == TargetFunction::Kind::adder) {
    encode_adder_reference(f.width, f.carry_out, input_vars, output_vars, out);
    return;
  }

  const int l = f.inputs;
  std::vector<Lit> scratch;
  for (std::uint64_t v = 0; v < (std::uint64_t{1} << l); ++v) {
    const std::uint64_t row = f.table[static_cast<std::size_t>(v)];
    for (int j = 0; j < f.outputs; ++j) {
      scratch.clear();
      for (int i = 0; i < l; ++i)
        scratch.push_back(make_lit(input_vars[static_cast<std::size_t>(i)],
                                   (v >> i) & 1u));
      scratch.push_back(make_lit(output_vars[static_cast<std::size_t>(j)],
                                 ((row >> j) & 1u) == 0));
      out.add_clause(scratch);
    }
  }
}

QbfProblem assemble(const CircuitModel& model, const TargetFunction& f) {
  model.validate();
  if (static_cast<int>(model.input_word.size()) != f.arity_in() ||
      static_cast<int>(model.outputs.size()) != f.arity_out())
    throw std::invalid_argument("model/target arity mismatch");

  QbfProblem p;
  VarMap vm(model.signals.size());

  const auto allocate = [&](int signal_id, VarRole role, std::vector<int>& block) {
    const int v = p.matrix.new_var();
    vm.bind(signal_id, v);
    block.push_back(v);
    p.symbols.push_back(VarInfo{role, signal_id, model.signal(signal_id).name});
  };

  for (const auto& s : model.signals)
    if (s.kind == SignalKind::config)
      allocate(s.id, VarRole::config, p.config_vars);
  for (const int x : model.input_word)
    allocate(x, VarRole::input, p.input_vars);
  for (const auto& s : model.signals)
    if (s.kind == SignalKind::node || s.kind == SignalKind::const0 ||
        s.kind == SignalKind::const1)
      allocate(s.id, VarRole::node, p.node_vars);

  // Constants are inner-existential variables pinned by unit clauses.
  for (const auto& s : model.signals) {
    if (s.kind == SignalKind::const0)
      p.matrix.add_clause({-vm[s.id]});
    else if (s.kind == SignalKind::const1)
      p.matrix.add_clause({vm[s.id]});
  }

  std::vector<int> pool, bits;
  for (const auto& prim : model.primitives) {
    switch (prim.kind) {
    case PrimitiveKind::lut:
      encode_lut(prim, vm, p.matrix);
      break;
    case PrimitiveKind::cmux:
    case PrimitiveKind::choose: {
      pool.clear();
      for (const int s : prim.inputs)
        pool.push_back(vm[s]);
      bits.clear();
      for (const int s : prim.config)
        bits.push_back(vm[s]);
      if (prim.kind == PrimitiveKind::cmux) {
        encode_cmux(pool, vm[prim.outputs[0]], bits, p.matrix);
      } else {
        std::vector<int> outs;
        for (const int s : prim.outputs)
          outs.push_back(vm[s]);
        encode_choose(pool, outs, bits, p.matrix);
      }
      break;
    }
    case PrimitiveKind::muxcy:
    case PrimitiveKind::xorcy:
      encode_carry_cell(prim, vm, p.matrix);
      break;
    }
  }

  std::vector<int> in_vars, out_vars;
  for (const int s : model.input_word)
    in_vars.push_back(vm[s]);
  for (const int s : model.outputs)
    out_vars.push_back(vm[s]);

  const int before_aux = p.matrix.var_count();
  encode_target_function(f, in_vars, out_vars, p.matrix);
  for (int v = before_aux + 1; v <= p.matrix.var_count(); ++v) {
    p.node_vars.push_back(v);
    p.symbols.push_back(VarInfo{VarRole::node, -1, ""});
  }

  p.validate();
  return p;
}

} // namespace qbfmap
