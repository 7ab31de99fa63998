#include "qbfmap/model_io.hpp"

#include <ostream>
#include <stdexcept>

#include "json.hpp"

namespace qbfmap {

namespace {

using nlohmann::json;

SignalKind signal_kind_from_string(const std::string& s) {
  if (s == "config")
    return SignalKind::config;
  if (s == "input")
    return SignalKind::input;
  if (s == "node")
    return SignalKind::node;
  if (s == "const0")
    return SignalKind::const0;
  if (s == "const1")
    return SignalKind::const1;
  throw std::runtime_error("unknown signal kind: " + s);
}

PrimitiveKind primitive_kind_from_string(const std::string& s) {
  if (s == "lut")
    return PrimitiveKind::lut;
  if (s == "cmux")
    return PrimitiveKind::cmux;
  if (s == "choose")
    return PrimitiveKind::choose;
  if (s == "muxcy")
    return PrimitiveKind::muxcy;
  if (s == "xorcy")
    return PrimitiveKind::xorcy;
  throw std::runtime_error("unknown primitive kind: " + s);
}

json target_to_json(const TargetFunction& t) {
  json j;
  if (t.kind == TargetFunction::Kind::adder) {
    j["kind"] = "adder";
    j["width"] = t.width;
    j["carry_out"] = t.carry_out;
  } else {
    j["kind"] = "truth_table";
    j["inputs"] = t.inputs;
    j["outputs"] = t.outputs;
    j["table"] = t.table;
  }
  return j;
}

TargetFunction target_from_json(const json& j) {
  const std::string kind = j.at("kind").get<std::string>();
  if (kind == "adder")
    return TargetFunction::adder(j.at("width").get<int>(), j.at("carry_out").get<bool>());
  if (kind == "truth_table")
    return TargetFunction::truth_table(j.at("inputs").get<int>(), j.at("outputs").get<int>(),
                                       j.at("table").get<std::vector<std::uint64_t>>());
  throw std::runtime_error("unknown target kind: " + kind);
}

} // namespace

void save_model(std::ostream& os, const CircuitModel& model, const TargetFunction& target) {
  json j;
  j["version"] = 1;
  json signals = json::array();
  for (const Signal& s : model.signals)
    signals.push_back({{"id", s.id}, {"name", s.name}, {"kind", to_string(s.kind)}});
  j["signals"] = std::move(signals);
  j["inputs"] = model.input_word;
  j["outputs"] = model.outputs;
  json prims = json::array();
  for (const Primitive& p : model.primitives)
    prims.push_back({{"kind", to_string(p.kind)},
                     {"inputs", p.inputs},
                     {"config", p.config},
                     {"outputs", p.outputs}});
  j["primitives"] = std::move(prims);
  j["target"] = target_to_json(target);
  os << j.dump(2) << '\n';
}

ModelBundle load_model(std::istream& is) {
  json j;
  try {
    j = json::parse(is);
  } catch (const json::exception& e) {
    throw std::runtime_error(std::string("malformed model file: ") + e.what());
  }
  try {
    const int version = j.at("version").get<int>();
    if (version != 1)
      throw std::runtime_error("unsupported model file version " + std::to_string(version));
    ModelBundle b;
    for (const auto& js : j.at("signals")) {
      Signal s;
      s.id = js.at("id").get<int>();
      s.name = js.at("name").get<std::string>();
      s.kind = signal_kind_from_string(js.at("kind").get<std::string>());
      b.model.signals.push_back(std::move(s));
    }
    b.model.input_word = j.at("inputs").get<std::vector<int>>();
    b.model.outputs = j.at("outputs").get<std::vector<int>>();
    for (const auto& jp : j.at("primitives")) {
      Primitive p;
      p.kind = primitive_kind_from_string(jp.at("kind").get<std::string>());
      p.inputs = jp.at("inputs").get<std::vector<int>>();
      p.config = jp.at("config").get<std::vector<int>>();
      p.outputs = jp.at("outputs").get<std::vector<int>>();
      b.model.primitives.push_back(std::move(p));
    }
    b.target = target_from_json(j.at("target"));
    b.model.validate();
    return b;
  } catch (const json::exception& e) {
    throw std::runtime_error(std::string("malformed model file: ") + e.what());
  }
}

void save_configuration(std::ostream& os, const Configuration& config,
                        const CircuitModel* model) {
  json bits = json::array();
  for (const auto& [id, value] : config.bits) {
    json b;
    b["id"] = id;
    if (model && id >= 0 && id < static_cast<int>(model->signals.size()))
      b["name"] = model->signal(id).name;
    b["value"] = value;
    bits.push_back(std::move(b));
  }
  json j;
  j["version"] = 1;
  j["bits"] = std::move(bits);
  os << j.dump(2) << '\n';
}

Configuration load_configuration(std::istream& is) {
  json j;
  try {
    j = json::parse(is);
  } catch (const json::exception& e) {
    throw std::runtime_error(std::string("malformed configuration file: ") + e.what());
  }
  try {
    const int version = j.at("version").get<int>();
    if (version != 1)
      throw std::runtime_error("unsupported configuration file version " +
                               std::to_string(version));
    Configuration c;
    for (const auto& jb : j.at("bits"))
      c.bits[jb.at("id").get<int>()] = jb.at("value").get<bool>();
    return c;
  } catch (const json::exception& e) {
    throw std::runtime_error(std::string("malformed configuration file: ") + e.what());
  }
}

} // namespace qbfmap
