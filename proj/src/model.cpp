#include "qbfmap/model.hpp"

#include "qbfmap/combin.hpp"

#include <algorithm>
#include <stdexcept>

namespace qbfmap {

const char* to_string(SignalKind k) {
  switch (k) {
  case SignalKind::config: return "config";
  case SignalKind::input: return "input";
  case SignalKind::node: return "node";
  case SignalKind::const0: return "const0";
  case SignalKind::const1: return "const1";
  }
  return "?";
}

const char* to_string(PrimitiveKind k) {
  switch (k) {
  case PrimitiveKind::lut: return "lut";
  case PrimitiveKind::cmux: return "cmux";
  case PrimitiveKind::choose: return "choose";
  case PrimitiveKind::muxcy: return "muxcy";
  case PrimitiveKind::xorcy: return "xorcy";
  }
  return "?";
}

const char* to_string(SelectionEncoding e) {
  switch (e) {
  case SelectionEncoding::naive_cmux: return "naive";
  case SelectionEncoding::shrinking_cmux: return "shrinking";
  case SelectionEncoding::choose: return "choose";
  }
  return "?";
}

SelectionEncoding selection_encoding_from_string(const std::string& s) {
  if (s == "naive")
    return SelectionEncoding::naive_cmux;
  if (s == "shrinking")
    return SelectionEncoding::shrinking_cmux;
  if (s == "choose")
    return SelectionEncoding::choose;
  throw std::invalid_argument("unknown selection encoding: " + s);
}

int CircuitModel::add_signal(SignalKind kind, std::string name) {
  const int id = static_cast<int>(signals.size());
  signals.push_back(Signal{id, std::move(name), kind});
  return id;
}

int CircuitModel::count_kind(SignalKind k) const {
  int n = 0;
  for (const auto& s : signals)
    if (s.kind == k)
      ++n;
  return n;
}

std::vector<int> CircuitModel::driver_map() const {
  std::vector<int> driver(signals.size(), -1);
  for (std::size_t p = 0; p < primitives.size(); ++p) {
    for (int out : primitives[p].outputs) {
      if (out < 0 || out >= static_cast<int>(signals.size()))
        throw std::invalid_argument("primitive output id out of range");
      if (driver[static_cast<std::size_t>(out)] != -1)
        throw std::invalid_argument("signal '" + signals[static_cast<std::size_t>(out)].name +
                                    "' has more than one driver");
      driver[static_cast<std::size_t>(out)] = static_cast<int>(p);
    }
  }
  return driver;
}

namespace {

void check_primitive_shape(const CircuitModel& m, const Primitive& p) {
  const auto bad = [&](const std::string& msg) {
    throw std::invalid_argument(std::string(to_string(p.kind)) + " primitive: " + msg);
  };
  for (int in : p.inputs) {
    if (in < 0 || in >= static_cast<int>(m.signals.size()))
      bad("input id out of range");
    if (m.signal(in).kind == SignalKind::config)
      bad("config signal used as data input");
  }
  for (int c : p.config)
    if (c < 0 || c >= static_cast<int>(m.signals.size()) ||
        m.signal(c).kind != SignalKind::config)
      bad("config slot is not a CONFIG signal");
  for (int out : p.outputs)
    if (m.signal(out).kind != SignalKind::node)
      bad("output is not a NODE signal");

  const int n = static_cast<int>(p.inputs.size());
  const int k = static_cast<int>(p.outputs.size());
  switch (p.kind) {
  case PrimitiveKind::lut:
    if (k != 1)
      bad("needs exactly one output");
    if (p.config.size() != (std::size_t{1} << n))
      bad("truth table size must be 2^arity");
    break;
  case PrimitiveKind::cmux:
    if (k != 1)
      bad("needs exactly one output");
    if (n < 1)
      bad("empty candidate pool");
    if (static_cast<int>(p.config.size()) != ceil_log2(static_cast<std::uint64_t>(n)))
      bad("selector width must be ceil(log2(pool))");
    break;
  case PrimitiveKind::choose:
    if (k < 1 || k > n)
      bad("needs 1 <= outputs <= pool size");
    if (static_cast<int>(p.config.size()) !=
        ceil_log2(binomial(n, k)))
      bad("selector width must be ceil(log2(C(n,k)))");
    break;
  case PrimitiveKind::muxcy:
    if (n != 3 || k != 1 || !p.config.empty())
      bad("must have 3 inputs, no config, 1 output");
    break;
  case PrimitiveKind::xorcy:
    if (n != 2 || k != 1 || !p.config.empty())
      bad("must have 2 inputs, no config, 1 output");
    break;
  }
}

} // namespace

void CircuitModel::validate() const {
  for (std::size_t i = 0; i < signals.size(); ++i)
    if (signals[i].id != static_cast<int>(i))
      throw std::invalid_argument("signal ids must be dense indices");

  const std::vector<int> driver = driver_map();
  for (const auto& s : signals) {
    const bool driven = driver[static_cast<std::size_t>(s.id)] != -1;
    switch (s.kind) {
    case SignalKind::node:
      if (!driven)
        throw std::invalid_argument("node '" + s.name + "' has no driver");
      break;
    case SignalKind::config:
    case SignalKind::input:
    case SignalKind::const0:
    case SignalKind::const1:
      if (driven)
        throw std::invalid_argument("signal '" + s.name + "' must not be driven");
      break;
    }
  }

  for (const auto& p : primitives)
    check_primitive_shape(*this, p);

  // Each CONFIG signal belongs to exactly one primitive so a Configuration
  // decodes unambiguously into per-primitive settings.
  {
    std::vector<int> uses(signals.size(), 0);
    for (const auto& p : primitives)
      for (int c : p.config)
        ++uses[static_cast<std::size_t>(c)];
    for (const auto& s : signals)
      if (s.kind == SignalKind::config && uses[static_cast<std::size_t>(s.id)] != 1)
        throw std::invalid_argument("config signal '" + s.name +
                                    "' must feed exactly one primitive");
  }

  for (int x : input_word)
    if (x < 0 || x >= static_cast<int>(signals.size()) ||
        signal(x).kind != SignalKind::input)
      throw std::invalid_argument("input_word entry is not an INPUT signal");
  if (static_cast<int>(input_word.size()) != count_kind(SignalKind::input))
    throw std::invalid_argument("input_word must list every INPUT signal");

  for (int y : outputs)
    if (y < 0 || y >= static_cast<int>(signals.size()) ||
        signal(y).kind != SignalKind::node)
      throw std::invalid_argument("output entry is not a NODE signal");

  // Acyclicity: iterative DFS over the driver relation.
  {
    enum : char { white, grey, black };
    std::vector<char> color(signals.size(), white);
    std::vector<int> stack;
    for (const auto& seed : signals) {
      if (color[static_cast<std::size_t>(seed.id)] != white)
        continue;
      stack.push_back(seed.id);
      while (!stack.empty()) {
        const int s = stack.back();
        auto& c = color[static_cast<std::size_t>(s)];
        if (c == white) {
          c = grey;
          const int d = driver[static_cast<std::size_t>(s)];
          if (d != -1) {
            for (int in : primitives[static_cast<std::size_t>(d)].inputs) {
              const char ic = color[static_cast<std::size_t>(in)];
              if (ic == grey)
                throw std::invalid_argument("combinational cycle through '" +
                                            signal(in).name + "'");
              if (ic == white)
                stack.push_back(in);
            }
          }
        } else {
          c = black;
          stack.pop_back();
        }
      }
    }
  }
}

TargetFunction TargetFunction::adder(int width, bool carry_out) {
  if (width < 1)
    throw std::invalid_argument("adder width must be >= 1");
  TargetFunction f;
  f.kind = Kind::adder;
  f.width = width;
  f.carry_out = carry_out;
  f.inputs = 2 * width;
  f.outputs = carry_out ? width + 1 : width;
  return f;
}

TargetFunction TargetFunction::truth_table(int inputs, int outputs,
                                           std::vector<std::uint64_t> rows) {
  if (inputs < 0 || inputs > 20)
    throw std::invalid_argument("truth table arity out of supported range");
  if (outputs < 1 || outputs > 64)
    throw std::invalid_argument("truth table output count out of supported range");
  if (rows.size() != (std::size_t{1} << inputs))
    throw std::invalid_argument("truth table must have 2^inputs rows");
  TargetFunction f;
  f.kind = Kind::truth_table;
  f.inputs = inputs;
  f.outputs = outputs;
  f.table = std::move(rows);
  return f;
}

std::uint64_t TargetFunction::eval(std::uint64_t x) const {
  if (kind == Kind::adder) {
    const std::uint64_t mask = (width >= 64) ? ~std::uint64_t{0}
                                             : ((std::uint64_t{1} << width) - 1);
    const std::uint64_t a = x & mask;
    const std::uint64_t b = (x >> width) & mask;
    std::uint64_t sum = a + b;
    if (!carry_out)
      sum &= mask;
    return sum;
  }
  return table.at(static_cast<std::size_t>(x));
}

bool Configuration::bit(int signal_id) const {
  const auto it = bits.find(signal_id);
  if (it == bits.end())
    throw std::out_of_range("configuration has no value for signal " +
                            std::to_string(signal_id));
  return it->second;
}

bool Configuration::covers(const CircuitModel& model) const {
  for (const auto& s : model.signals)
    if (s.kind == SignalKind::config && !bits.count(s.id))
      return false;
  return true;
}

int config_bit_count(SelectionEncoding enc, int n, int k) {
  if (k < 1 || k > n)
    throw std::invalid_argument("config_bit_count: need 1 <= k <= n");
  switch (enc) {
  case SelectionEncoding::naive_cmux:
    return k * ceil_log2(static_cast<std::uint64_t>(n));
  case SelectionEncoding::shrinking_cmux: {
    int total = 0;
    for (int j = 0; j < k; ++j)
      total += ceil_log2(static_cast<std::uint64_t>(n - j));
    return total;
  }
  case SelectionEncoding::choose:
    return ceil_log2(binomial(n, k));
  }
  throw std::invalid_argument("config_bit_count: bad encoding");
}

namespace {

std::string indexed(const std::string& base, int i) {
  return base + "[" + std::to_string(i) + "]";
}

/// Adds the config slots and output node of one n:1 selector and appends the
/// cmux primitive.  Returns the output node id.
int add_cmux(CircuitModel& m, const std::vector<int>& pool,
             const std::string& cfg_base, const std::string& out_name) {
  const int bits = ceil_log2(pool.size());
  Primitive p;
  p.kind = PrimitiveKind::cmux;
  p.inputs = pool;
  for (int b = 0; b < bits; ++b)
    p.config.push_back(m.add_signal(SignalKind::config, indexed(cfg_base, b)));
  const int out = m.add_signal(SignalKind::node, out_name);
  p.outputs.push_back(out);
  m.primitives.push_back(std::move(p));
  return out;
}

} // namespace

CircuitModel build_carry_chain_adder(int width, SelectionEncoding enc,
                                     int lut_arity, bool carry_out) {
  if (width < 1)
    throw std::invalid_argument("adder width must be >= 1");
  if (lut_arity < 2)
    throw std::invalid_argument("lut arity must be >= 2");
  const int n = 2 * width + 2;
  const int k = lut_arity;
  if (enc != SelectionEncoding::naive_cmux && k > n)
    throw std::invalid_argument("lut arity exceeds pool size; only the naive "
                                "encoding can select with repetition");

  CircuitModel m;
  std::vector<int> pool;
  pool.push_back(m.add_signal(SignalKind::const0, "const0"));
  pool.push_back(m.add_signal(SignalKind::const1, "const1"));
  for (int i = 0; i < width; ++i)
    m.input_word.push_back(m.add_signal(SignalKind::input, "a" + std::to_string(i)));
  for (int i = 0; i < width; ++i)
    m.input_word.push_back(m.add_signal(SignalKind::input, "b" + std::to_string(i)));
  pool.insert(pool.end(), m.input_word.begin(), m.input_word.end());

  // Initial carry: one bit picks between constant 0 and constant 1.
  int carry = add_cmux(m, {pool[0], pool[1]}, "cin_sel", "c0");

  for (int i = 0; i < width; ++i) {
    const std::string s = "s" + std::to_string(i);

    std::vector<int> lut_inputs;
    switch (enc) {
    case SelectionEncoding::naive_cmux:
      for (int j = 0; j < k; ++j)
        lut_inputs.push_back(add_cmux(m, pool, s + "_in" + std::to_string(j) + "_sel",
                                      s + "_in" + std::to_string(j)));
      break;
    case SelectionEncoding::shrinking_cmux:
      for (int j = 0; j < k; ++j) {
        const std::vector<int> prefix(pool.begin(), pool.begin() + (n - j));
        lut_inputs.push_back(add_cmux(m, prefix, s + "_in" + std::to_string(j) + "_sel",
                                      s + "_in" + std::to_string(j)));
      }
      break;
    case SelectionEncoding::choose: {
      Primitive p;
      p.kind = PrimitiveKind::choose;
      p.inputs = pool;
      const int bits = ceil_log2(binomial(n, k));
      for (int b = 0; b < bits; ++b)
        p.config.push_back(m.add_signal(SignalKind::config, indexed(s + "_choose", b)));
      for (int j = 0; j < k; ++j) {
        const int out = m.add_signal(SignalKind::node, s + "_in" + std::to_string(j));
        p.outputs.push_back(out);
        lut_inputs.push_back(out);
      }
      m.primitives.push_back(std::move(p));
      break;
    }
    }

    Primitive lut;
    lut.kind = PrimitiveKind::lut;
    lut.inputs = lut_inputs;
    for (int t = 0; t < (1 << k); ++t)
      lut.config.push_back(m.add_signal(SignalKind::config, indexed(s + "_lut", t)));
    const int lut_out = m.add_signal(SignalKind::node, s + "_out");
    lut.outputs.push_back(lut_out);
    m.primitives.push_back(std::move(lut));

    const int di = add_cmux(m, pool, s + "_di_sel", s + "_di");

    const int carry_next =
        m.add_signal(SignalKind::node, "c" + std::to_string(i + 1));
    m.primitives.push_back(
        Primitive{PrimitiveKind::muxcy, {lut_out, carry, di}, {}, {carry_next}});

    const int sum = m.add_signal(SignalKind::node, "y" + std::to_string(i));
    m.primitives.push_back(
        Primitive{PrimitiveKind::xorcy, {lut_out, carry}, {}, {sum}});

    m.outputs.push_back(sum);
    carry = carry_next;
  }
  if (carry_out)
    m.outputs.push_back(carry);

  m.validate();
  return m;
}

} // namespace qbfmap
