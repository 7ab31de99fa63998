#include "qbfmap/verify.hpp"

#include "qbfmap/combin.hpp"

#include <random>
#include <sstream>
#include <vector>

namespace qbfmap {

namespace {

std::uint64_t selector_code(const CircuitModel& model, const Primitive& prim,
                            const Configuration& config) {
  std::uint64_t code = 0;
  for (std::size_t b = 0; b < prim.config.size(); ++b)
    if (config.bit(prim.config[b]))
      code |= std::uint64_t{1} << b;
  (void)model;
  return code;
}

struct Evaluator {
  const CircuitModel& model;
  const Configuration& config;
  std::uint64_t inputs;
  std::vector<int> driver;
  std::vector<std::int8_t> value; // -1 unknown, else 0/1

  Evaluator(const CircuitModel& m, const Configuration& c, std::uint64_t x)
      : model(m), config(c), inputs(x), driver(m.driver_map()),
        value(m.signals.size(), -1) {}

  bool eval(int sig) {
    auto& v = value[static_cast<std::size_t>(sig)];
    if (v >= 0)
      return v != 0;
    const Signal& s = model.signal(sig);
    bool r = false;
    switch (s.kind) {
    case SignalKind::const0:
      r = false;
      break;
    case SignalKind::const1:
      r = true;
      break;
    case SignalKind::config:
      r = config.bit(sig);
      break;
    case SignalKind::input: {
      // position within the input word
      for (std::size_t i = 0; i < model.input_word.size(); ++i)
        if (model.input_word[i] == sig) {
          r = (inputs >> i) & 1u;
          break;
        }
      break;
    }
    case SignalKind::node:
      r = eval_node(sig);
      break;
    }
    v = r ? 1 : 0;
    return r;
  }

  bool eval_node(int sig) {
    const int d = driver[static_cast<std::size_t>(sig)];
    const Primitive& p = model.primitives[static_cast<std::size_t>(d)];
    switch (p.kind) {
    case PrimitiveKind::lut: {
      std::uint64_t idx = 0;
      for (std::size_t j = 0; j < p.inputs.size(); ++j)
        if (eval(p.inputs[j]))
          idx |= std::uint64_t{1} << j;
      return config.bit(p.config[static_cast<std::size_t>(idx)]);
    }
    case PrimitiveKind::cmux: {
      const std::uint64_t code = selector_code(model, p, config);
      if (code >= p.inputs.size())
        throw BlockedCodeError("cmux selector code " + std::to_string(code) +
                               " exceeds pool size " + std::to_string(p.inputs.size()));
      return eval(p.inputs[static_cast<std::size_t>(code)]);
    }
    case PrimitiveKind::choose: {
      const int n = static_cast<int>(p.inputs.size());
      const int k = static_cast<int>(p.outputs.size());
      const std::uint64_t code = selector_code(model, p, config);
      if (code >= binomial(n, k))
        throw BlockedCodeError("choose selector code " + std::to_string(code) +
                               " exceeds C(" + std::to_string(n) + "," +
                               std::to_string(k) + ")");
      const std::vector<int> comb = combination_unrank(code, n, k);
      for (int j = 0; j < k; ++j)
        if (p.outputs[static_cast<std::size_t>(j)] == sig)
          return eval(p.inputs[static_cast<std::size_t>(comb[static_cast<std::size_t>(j)])]);
      throw std::logic_error("choose output not found");
    }
    case PrimitiveKind::muxcy:
      return eval(p.inputs[0]) ? eval(p.inputs[1]) : eval(p.inputs[2]);
    case PrimitiveKind::xorcy:
      return eval(p.inputs[0]) != eval(p.inputs[1]);
    }
    throw std::logic_error("unhandled primitive kind");
  }
};

} // namespace

std::uint64_t simulate(const CircuitModel& model, const Configuration& config,
                       std::uint64_t inputs) {
  if (!config.covers(model))
    throw std::invalid_argument("configuration does not cover all config signals");
  Evaluator ev(model, config, inputs);
  std::uint64_t y = 0;
  for (std::size_t i = 0; i < model.outputs.size(); ++i)
    if (ev.eval(model.outputs[i]))
      y |= std::uint64_t{1} << i;
  return y;
}

VerifyResult verify_implements(const CircuitModel& model, const Configuration& config,
                               const TargetFunction& f, int exhaustive_limit,
                               std::uint64_t samples, std::uint64_t seed) {
  if (static_cast<int>(model.input_word.size()) != f.arity_in() ||
      static_cast<int>(model.outputs.size()) != f.arity_out())
    throw std::invalid_argument("model/target arity mismatch");

  const int l = f.arity_in();
  VerifyResult res;
  const auto check_one = [&](std::uint64_t x) {
    const std::uint64_t got = simulate(model, config, x);
    const std::uint64_t want = f.eval(x);
    ++res.checked;
    if (got != want) {
      res.ok = false;
      res.inputs = x;
      res.got = got;
      res.want = want;
      return false;
    }
    return true;
  };

  res.ok = true;
  if (l <= exhaustive_limit) {
    res.exhaustive = true;
    for (std::uint64_t x = 0; x < (std::uint64_t{1} << l); ++x)
      if (!check_one(x))
        return res;
  } else {
    res.exhaustive = false;
    std::mt19937_64 rng(seed);
    const std::uint64_t mask =
        l >= 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << l) - 1;
    for (std::uint64_t i = 0; i < samples; ++i)
      if (!check_one(rng() & mask))
        return res;
  }
  return res;
}

std::string describe_configuration(const CircuitModel& model, const Configuration& config) {
  std::ostringstream os;
  for (std::size_t pi = 0; pi < model.primitives.size(); ++pi) {
    const Primitive& p = model.primitives[pi];
    switch (p.kind) {
    case PrimitiveKind::lut: {
      os << model.signal(p.outputs[0]).name << " = lut table 0x";
      // hex digits, most significant minterm first
      const int digits = std::max<int>(1, static_cast<int>(p.config.size()) / 4);
      for (int d = digits - 1; d >= 0; --d) {
        int nib = 0;
        for (int b = 3; b >= 0; --b) {
          const std::size_t idx = static_cast<std::size_t>(d) * 4 + static_cast<std::size_t>(b);
          nib = (nib << 1) | (idx < p.config.size() && config.bit(p.config[idx]) ? 1 : 0);
        }
        os << "0123456789abcdef"[nib];
      }
      os << '\n';
      break;
    }
    case PrimitiveKind::cmux: {
      const std::uint64_t code = selector_code(model, p, config);
      os << model.signal(p.outputs[0]).name << " = select ";
      if (code < p.inputs.size())
        os << model.signal(p.inputs[static_cast<std::size_t>(code)]).name;
      else
        os << "<blocked code " << code << ">";
      os << '\n';
      break;
    }
    case PrimitiveKind::choose: {
      const int n = static_cast<int>(p.inputs.size());
      const int k = static_cast<int>(p.outputs.size());
      const std::uint64_t code = selector_code(model, p, config);
      if (code < binomial(n, k)) {
        const std::vector<int> comb = combination_unrank(code, n, k);
        for (int j = 0; j < k; ++j)
          os << model.signal(p.outputs[static_cast<std::size_t>(j)]).name << " = choose "
             << model.signal(p.inputs[static_cast<std::size_t>(comb[static_cast<std::size_t>(j)])]).name
             << '\n';
      } else {
        os << model.signal(p.outputs[0]).name << " = <blocked code " << code << ">\n";
      }
      break;
    }
    case PrimitiveKind::muxcy:
    case PrimitiveKind::xorcy:
      break; // no configuration
    }
  }
  return os.str();
}

} // namespace qbfmap
