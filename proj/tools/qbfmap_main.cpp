#include <chrono>
#include <cstdint>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "qbfmap/cnf.hpp"
#include "qbfmap/model.hpp"
#include "qbfmap/model_io.hpp"
#include "qbfmap/qdimacs.hpp"
#include "qbfmap/solve.hpp"
#include "qbfmap/testset.hpp"
#include "qbfmap/verify.hpp"

namespace {

constexpr int exit_ok = 0;
constexpr int exit_sat = 10;
constexpr int exit_unsat = 20;
constexpr int exit_unknown = 30;
constexpr int exit_error = 1;

qbfmap::QbfProblem read_problem(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is)
    throw std::runtime_error("cannot open " + path);
  return qbfmap::parse_qdimacs(is);
}

int run_generate(const std::string& out, bool testset, int width,
                 const std::string& encoding, int lut_arity, bool carry_out,
                 const std::string& model_out) {
  if (testset) {
    qbfmap::generate_test_set(out, qbfmap::default_widths(), qbfmap::all_encodings(),
                              lut_arity, carry_out);
    return exit_ok;
  }
  if (width <= 0)
    throw std::runtime_error("--width is required (or use --testset)");
  const auto enc = qbfmap::selection_encoding_from_string(encoding);
  const qbfmap::CircuitModel model =
      qbfmap::build_carry_chain_adder(width, enc, lut_arity, carry_out);
  const qbfmap::TargetFunction target = qbfmap::TargetFunction::adder(width, carry_out);
  const qbfmap::QbfProblem problem = qbfmap::assemble(model, target);
  std::ofstream os(out, std::ios::binary);
  if (!os)
    throw std::runtime_error("cannot open " + out + " for writing");
  qbfmap::write_qdimacs(problem, os);
  if (!os)
    throw std::runtime_error("write failed for " + out);
  if (!model_out.empty()) {
    std::ofstream ms(model_out, std::ios::binary);
    if (!ms)
      throw std::runtime_error("cannot open " + model_out + " for writing");
    qbfmap::save_model(ms, model, target);
    if (!ms)
      throw std::runtime_error("write failed for " + model_out);
  }
  return exit_ok;
}

// Strips a trailing [index] so selector bits group under one name.
std::string base_name(const std::string& name) {
  const auto pos = name.rfind('[');
  return pos == std::string::npos ? name : name.substr(0, pos);
}

int run_stats(const std::string& path) {
  const qbfmap::QbfProblem p = read_problem(path);
  std::cout << "file " << path << '\n'
            << "config_vars " << p.config_vars.size() << '\n'
            << "input_vars " << p.input_vars.size() << '\n'
            << "node_vars " << p.node_vars.size() << '\n'
            << "clauses " << p.matrix.size() << '\n'
            << "max_clause_length " << p.matrix.max_clause_length() << '\n';

  bool named = false;
  std::size_t lut_bits = 0, sel_bits = 0, choose_bits = 0;
  std::vector<std::pair<std::string, std::size_t>> selectors;
  std::map<std::string, std::size_t> index;
  for (const int v : p.config_vars) {
    const std::string& name = p.info(v).name;
    if (name.empty())
      continue;
    named = true;
    const std::string base = base_name(name);
    const bool is_choose = base.size() >= 7 && base.rfind("_choose") == base.size() - 7;
    const bool is_sel = base.size() >= 4 && base.rfind("_sel") == base.size() - 4;
    if (base.rfind("_lut") != std::string::npos && !is_sel && !is_choose) {
      lut_bits += 1;
      continue;
    }
    if (!is_choose && !is_sel) {
      // lone selector bits carry no suffix (1-bit selectors keep [0])
      continue;
    }
    (is_choose ? choose_bits : sel_bits) += 1;
    const auto it = index.find(base);
    if (it == index.end()) {
      index.emplace(base, selectors.size());
      selectors.emplace_back(base, 1);
    } else {
      selectors[it->second].second += 1;
    }
  }
  if (named) {
    std::cout << "config_bits_lut " << lut_bits << '\n'
              << "config_bits_cmux " << sel_bits << '\n'
              << "config_bits_choose " << choose_bits << '\n';
    for (const auto& [name, bits] : selectors)
      std::cout << "selector " << name << " bits " << bits << '\n';
  }
  return exit_ok;
}

int run_solve(const std::string& path, bool embedded, const std::string& solver_cmd,
              int timeout_s, const std::string& model_path, const std::string& config_out,
              bool activity, std::uint64_t max_copies) {
  const qbfmap::QbfProblem problem = read_problem(path);

  qbfmap::SolveOutcome outcome;
  if (!solver_cmd.empty()) {
    outcome = qbfmap::solve_external(problem, solver_cmd, std::chrono::seconds(timeout_s));
  } else {
    (void)embedded; // embedded is the default path
    std::function<bool()> cancel;
    if (timeout_s > 0) {
      const auto deadline =
          std::chrono::steady_clock::now() + std::chrono::seconds(timeout_s);
      cancel = [deadline] { return std::chrono::steady_clock::now() >= deadline; };
    }
    outcome = qbfmap::solve_embedded(problem, max_copies, cancel, activity);
  }

  switch (outcome.status) {
  case qbfmap::SolveStatus::sat:
    std::cout << "SAT\n";
    break;
  case qbfmap::SolveStatus::unsat:
    std::cout << "UNSAT\n";
    break;
  case qbfmap::SolveStatus::unknown:
    std::cout << "UNKNOWN\n";
    break;
  }

  if (outcome.status == qbfmap::SolveStatus::sat && !model_path.empty()) {
    if (config_out.empty())
      throw std::runtime_error("--decode requires -o CONFIG.json");
    std::ifstream ms(model_path, std::ios::binary);
    if (!ms)
      throw std::runtime_error("cannot open " + model_path);
    const qbfmap::ModelBundle bundle = qbfmap::load_model(ms);
    std::vector<std::string> warnings;
    const qbfmap::Configuration config = qbfmap::decode_configuration_for_model(
        problem, outcome.config_values, bundle.model, &warnings);
    for (const std::string& w : warnings)
      std::cerr << "warning: " << w << '\n';
    std::ofstream os(config_out, std::ios::binary);
    if (!os)
      throw std::runtime_error("cannot open " + config_out + " for writing");
    qbfmap::save_configuration(os, config, &bundle.model);
    if (!os)
      throw std::runtime_error("write failed for " + config_out);
  }

  switch (outcome.status) {
  case qbfmap::SolveStatus::sat:
    return exit_sat;
  case qbfmap::SolveStatus::unsat:
    return exit_unsat;
  default:
    return exit_unknown;
  }
}

int run_verify(const std::string& model_path, const std::string& config_path) {
  std::ifstream ms(model_path, std::ios::binary);
  if (!ms)
    throw std::runtime_error("cannot open " + model_path);
  const qbfmap::ModelBundle bundle = qbfmap::load_model(ms);
  std::ifstream cs(config_path, std::ios::binary);
  if (!cs)
    throw std::runtime_error("cannot open " + config_path);
  const qbfmap::Configuration config = qbfmap::load_configuration(cs);
  if (!config.covers(bundle.model))
    throw std::runtime_error("configuration does not cover every config bit of the model");

  const qbfmap::VerifyResult r =
      qbfmap::verify_implements(bundle.model, config, bundle.target);
  if (r.ok) {
    std::cout << "OK checked " << r.checked << " inputs"
              << (r.exhaustive ? " (exhaustive)" : " (sampled)") << '\n';
    if (!r.exhaustive)
      std::cerr << "warning: input space too wide for exhaustive sweep; "
                << "result covers " << r.checked << " sampled words only\n";
    return exit_ok;
  }
  std::cout << "MISMATCH inputs=0x" << std::hex << r.inputs << " got=0x" << r.got
            << " want=0x" << r.want << std::dec << '\n';
  return exit_error;
}

} // namespace

int main(int argc, char** argv) {
  CLI::App app{"QBF-based mapping of functions onto configurable logic"};
  app.require_subcommand(1);

  auto* gen = app.add_subcommand("generate", "Build a mapping problem and write QDIMACS");
  int width = 0;
  std::string encoding = "naive";
  int lut_arity = 6;
  bool carry_out = true;
  bool testset = false;
  std::string gen_out;
  std::string model_out;
  gen->add_option("--width", width, "Adder operand width");
  gen->add_option("--encoding", encoding, "Selection encoding: naive|shrinking|choose")
      ->check(CLI::IsMember({"naive", "shrinking", "choose"}));
  gen->add_option("--lut-arity", lut_arity, "LUT input count")->check(CLI::Range(1, 16));
  gen->add_flag("--carry-out,!--no-carry-out", carry_out,
                "Expose the final carry as an output (default on)");
  gen->add_flag("--testset", testset, "Emit the full width 4-7 benchmark set into -o DIR");
  gen->add_option("-o,--output", gen_out, "Output file (or directory with --testset)")
      ->required();
  gen->add_option("--model-out", model_out, "Also write the model bundle as JSON");

  auto* stats = app.add_subcommand("stats", "Print size statistics of a QDIMACS file");
  std::string stats_file;
  stats->add_option("file", stats_file, "QDIMACS file")->required();

  auto* solve = app.add_subcommand("solve", "Decide a mapping problem");
  std::string solve_file;
  bool embedded = false;
  std::string solver_cmd;
  int timeout_s = 0;
  std::string decode_model;
  std::string config_out;
  bool activity = false;
  std::uint64_t max_copies = std::uint64_t{1} << 20;
  solve->add_option("file", solve_file, "QDIMACS file")->required();
  solve->add_flag("--embedded", embedded, "Use the built-in solver (default)");
  solve->add_option("--solver", solver_cmd, "External solver command, invoked as CMD FILE");
  solve->add_option("--timeout", timeout_s, "Time limit in seconds (0 = none)");
  solve->add_option("--decode", decode_model,
                    "Model bundle JSON used to decode the SAT answer");
  solve->add_option("-o,--output", config_out, "Configuration JSON output for --decode");
  solve->add_flag("--activity", activity,
                  "Embedded solver: conflict-activity decisions instead of fixed order");
  solve->add_option("--max-copies", max_copies,
                    "Expansion budget in node-block copies (embedded path)");

  auto* verify = app.add_subcommand("verify", "Check a configuration against its target");
  std::string verify_model;
  std::string verify_config;
  verify->add_option("--model", verify_model, "Model bundle JSON")->required();
  verify->add_option("--config", verify_config, "Configuration JSON")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return exit_error;
  }

  try {
    if (gen->parsed())
      return run_generate(gen_out, testset, width, encoding, lut_arity, carry_out,
                          model_out);
    if (stats->parsed())
      return run_stats(stats_file);
    if (solve->parsed()) {
      if (embedded && !solver_cmd.empty())
        throw std::runtime_error("--embedded and --solver are mutually exclusive");
      return run_solve(solve_file, embedded, solver_cmd, timeout_s, decode_model,
                       config_out, activity, max_copies);
    }
    if (verify->parsed())
      return run_verify(verify_model, verify_config);
    throw std::runtime_error("no command given");
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return exit_error;
  }
}
