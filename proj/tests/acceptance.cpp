// Exit-gate checks for the shipped pipeline.  Each numbered criterion prints
// one PASS/FAIL line (plus indented record lines where a result is reported
// without being required to pass).  Exit code is the number of failures.
//
// Usage: acceptance <qbfmap-cli> <golden-dir>

#include "qbfmap/combin.hpp"
#include "qbfmap/model.hpp"
#include "qbfmap/qdimacs.hpp"
#include "qbfmap/select.hpp"
#include "qbfmap/solve.hpp"

#include "qbf_oracle.hpp"

#include <openssl/evp.h>
#include <sys/wait.h>
#include <unistd.h>

#include <chrono>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <map>
#include <numeric>
#include <random>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace fs = std::filesystem;
using namespace qbfmap;

namespace {

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

std::string read_file(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  if (!in)
    throw std::runtime_error("cannot read " + p.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::string sha256_hex(const std::string& bytes) {
  unsigned char md[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (!EVP_Digest(bytes.data(), bytes.size(), md, &len, EVP_sha256(), nullptr))
    throw std::runtime_error("sha256 digest failed");
  static const char* hex = "0123456789abcdef";
  std::string out;
  for (unsigned int i = 0; i < len; ++i) {
    out.push_back(hex[md[i] >> 4]);
    out.push_back(hex[md[i] & 15]);
  }
  return out;
}

std::string fmt_seconds(double s) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.1fs", s);
  return buf;
}

struct RunResult {
  int exit_code = -1;
  double seconds = 0.0;
  std::string output;
};

// Runs CLI subprocesses and owns the scratch directory.
class Harness {
public:
  Harness(std::string cli, fs::path golden)
      : cli_(std::move(cli)), golden_(std::move(golden)) {
    char tmpl[] = "/tmp/qbfmap-accept-XXXXXX";
    if (!mkdtemp(tmpl))
      throw std::runtime_error("mkdtemp failed");
    dir_ = tmpl;
  }

  Harness(const Harness&) = delete;
  Harness& operator=(const Harness&) = delete;

  ~Harness() {
    std::error_code ec;
    fs::remove_all(dir_, ec);
  }

  RunResult run(const std::string& args) {
    const fs::path log = dir_ / "cmd.log";
    const std::string cmd = "'" + cli_ + "' " + args + " > '" + log.string() + "' 2>&1";
    const auto t0 = std::chrono::steady_clock::now();
    const int raw = std::system(cmd.c_str());
    RunResult r;
    r.seconds = seconds_since(t0);
    r.exit_code = WIFEXITED(raw) ? WEXITSTATUS(raw) : -1;
    r.output = read_file(log);
    return r;
  }

  const fs::path& dir() const { return dir_; }
  const fs::path& golden_dir() const { return golden_; }

private:
  std::string cli_;
  fs::path golden_;
  fs::path dir_;
};

struct Ctx {
  std::string detail;              // failure reason
  std::vector<std::string> notes;  // recorded results, printed indented

  void note(const std::string& s) { notes.push_back(s); }
  bool fail(const std::string& why) {
    detail = why;
    return false;
  }
};

const char* encoding_names[] = {"naive", "shrinking", "choose"};

const SelectionEncoding encoding_values[] = {
    SelectionEncoding::naive_cmux, SelectionEncoding::shrinking_cmux,
    SelectionEncoding::choose};

std::vector<std::string> testset_names() {
  std::vector<std::string> names;
  for (int w = 4; w <= 7; ++w)
    for (const char* e : encoding_names)
      names.push_back("adder" + std::to_string(w) + "_" + e + ".qdimacs");
  return names;
}

int ceil_log2(int n) {
  int b = 0;
  while ((1 << b) < n)
    ++b;
  return b;
}

// criterion 1: the benchmark set regenerates deterministically and matches
// the checked-in digests; every file parses with the full three-block prefix.
bool check_testset_regeneration(Harness& h, Ctx& ctx, fs::path& set_dir_out) {
  const fs::path a = h.dir() / "set_a";
  const fs::path b = h.dir() / "set_b";
  const RunResult ra = h.run("generate --testset -o '" + a.string() + "'");
  if (ra.exit_code != 0)
    return ctx.fail("first generate exited " + std::to_string(ra.exit_code));
  if (ra.seconds >= 5.0)
    return ctx.fail("generation took " + fmt_seconds(ra.seconds) + ", budget is 5s");
  const RunResult rb = h.run("generate --testset -o '" + b.string() + "'");
  if (rb.exit_code != 0)
    return ctx.fail("second generate exited " + std::to_string(rb.exit_code));
  if (rb.seconds >= 5.0)
    return ctx.fail("regeneration took " + fmt_seconds(rb.seconds) + ", budget is 5s");

  std::size_t qdimacs_files = 0;
  for (const auto& ent : fs::directory_iterator(a))
    if (ent.path().extension() == ".qdimacs")
      ++qdimacs_files;
  if (qdimacs_files != 12)
    return ctx.fail("expected 12 QDIMACS files, found " + std::to_string(qdimacs_files));

  std::vector<std::string> files = testset_names();
  for (const auto& name : files) {
    if (!fs::exists(a / name))
      return ctx.fail("missing " + name);
    std::ifstream in(a / name, std::ios::binary);
    QbfProblem p = parse_qdimacs(in);
    p.validate();
    if (p.config_vars.empty() || p.input_vars.empty() || p.node_vars.empty())
      return ctx.fail(name + ": prefix is missing a quantifier block");
  }

  files.push_back("manifest.tsv");
  for (const auto& name : files)
    if (read_file(a / name) != read_file(b / name))
      return ctx.fail(name + " differs between runs");

  std::map<std::string, std::string> golden;
  {
    const fs::path list = h.golden_dir() / "testset.sha256";
    std::ifstream in(list);
    if (!in)
      return ctx.fail("cannot read " + list.string());
    std::string hash, name;
    while (in >> hash >> name)
      golden[name] = hash;
  }
  if (golden.size() != files.size())
    return ctx.fail("golden list has " + std::to_string(golden.size()) + " entries, expected " +
                    std::to_string(files.size()));
  for (const auto& name : files) {
    const auto it = golden.find(name);
    if (it == golden.end())
      return ctx.fail("no golden digest for " + name);
    if (sha256_hex(read_file(a / name)) != it->second)
      return ctx.fail(name + " deviates from the golden digest");
  }

  set_dir_out = a;
  return true;
}

// criterion 2: width 4 solves SAT with the embedded solver within 10 minutes
// per encoding and the decoded configuration verifies over all 256 inputs.
// Width 5 is attempted under a shared one-hour budget and recorded only.
bool check_desk_scale_sat(Harness& h, Ctx& ctx) {
  for (const char* e : encoding_names) {
    const std::string base = (h.dir() / ("c2_add4_" + std::string(e))).string();
    const RunResult gen = h.run("generate --width 4 --encoding " + std::string(e) + " -o '" +
                                base + ".qdimacs' --model-out '" + base + ".json'");
    if (gen.exit_code != 0)
      return ctx.fail(std::string(e) + ": generate exited " + std::to_string(gen.exit_code));
    const RunResult solve = h.run("solve '" + base + ".qdimacs' --embedded --timeout 590 --decode '" +
                                  base + ".json' -o '" + base + "_cfg.json'");
    if (solve.exit_code != 10)
      return ctx.fail(std::string(e) + ": solve exited " + std::to_string(solve.exit_code) +
                      " after " + fmt_seconds(solve.seconds) + " (want SAT)");
    if (solve.seconds >= 600.0)
      return ctx.fail(std::string(e) + ": solve took " + fmt_seconds(solve.seconds));
    const RunResult verify =
        h.run("verify --model '" + base + ".json' --config '" + base + "_cfg.json'");
    if (verify.exit_code != 0)
      return ctx.fail(std::string(e) + ": verify exited " + std::to_string(verify.exit_code) +
                      ": " + verify.output);
    if (verify.output.find("checked 256 inputs (exhaustive)") == std::string::npos)
      return ctx.fail(std::string(e) + ": verify did not sweep all 256 inputs: " + verify.output);
    ctx.note("width-4 " + std::string(e) + ": SAT in " + fmt_seconds(solve.seconds) +
             ", configuration verified over 256 inputs");
  }

  // Width 5 record.  Not part of the pass condition.  The hour is shared:
  // each encoding gets an equal slice of whatever budget remains.
  const char* env = std::getenv("QBFMAP_W5_BUDGET");
  const double budget = env ? std::atof(env) : 3600.0;
  const auto t0 = std::chrono::steady_clock::now();
  for (int idx = 0; idx < 3; ++idx) {
    const char* e = encoding_names[idx];
    const double slice = (budget - seconds_since(t0)) / (3 - idx);
    if (slice < 1.0) {
      ctx.note("width-5 " + std::string(e) + ": not attempted, budget exhausted");
      continue;
    }
    const std::string base = (h.dir() / ("c2_add5_" + std::string(e))).string();
    const RunResult gen = h.run("generate --width 5 --encoding " + std::string(e) + " -o '" +
                                base + ".qdimacs' --model-out '" + base + ".json'");
    if (gen.exit_code != 0) {
      ctx.note("width-5 " + std::string(e) + ": generate exited " + std::to_string(gen.exit_code));
      continue;
    }
    const RunResult solve =
        h.run("solve '" + base + ".qdimacs' --embedded --timeout " +
              std::to_string(static_cast<long>(slice)) + " --decode '" + base +
              ".json' -o '" + base + "_cfg.json'");
    std::string verdict;
    switch (solve.exit_code) {
    case 10: verdict = "SAT"; break;
    case 20: verdict = "UNSAT"; break;
    case 30: verdict = "UNKNOWN (timed out)"; break;
    default: verdict = "error exit " + std::to_string(solve.exit_code); break;
    }
    std::string line = "width-5 " + std::string(e) + ": " + verdict + " after " +
                       fmt_seconds(solve.seconds);
    if (solve.exit_code == 10) {
      const RunResult verify =
          h.run("verify --model '" + base + ".json' --config '" + base + "_cfg.json'");
      line += verify.exit_code == 0 ? ", configuration verified over 1024 inputs"
                                    : ", but verify exited " + std::to_string(verify.exit_code);
    }
    ctx.note(line);
  }
  return true;
}

// criterion 3: per-selector bit counts are ordered naive >= shrinking >=
// choose on the whole small grid, strictly naive > choose off the diagonal.
bool check_bit_count_ordering(Ctx& ctx) {
  for (int n = 1; n <= 16; ++n) {
    for (int k = 1; k <= n; ++k) {
      const int naive = config_bit_count(SelectionEncoding::naive_cmux, n, k);
      const int shrinking = config_bit_count(SelectionEncoding::shrinking_cmux, n, k);
      const int choose = config_bit_count(SelectionEncoding::choose, n, k);
      if (!(naive >= shrinking && shrinking >= choose))
        return ctx.fail("ordering fails at n=" + std::to_string(n) + " k=" + std::to_string(k) +
                        ": " + std::to_string(naive) + "/" + std::to_string(shrinking) + "/" +
                        std::to_string(choose));
      if (k >= 2 && n > k && !(naive > choose))
        return ctx.fail("no strict gap at n=" + std::to_string(n) + " k=" + std::to_string(k));
    }
  }
  return true;
}

// Shared sweep body: fills `values` (1-based) from packed pool/out/bit words
// and checks satisfied_by against the expected relation for every total
// assignment.
struct SelectorLayout {
  int n = 0;                    // pool size
  int k = 0;                    // output count
  std::vector<int> group_bits;  // selector bits per output group
  std::vector<int> group_pool;  // reachable pool prefix per group
};

bool sweep_grouped_selector(const ClauseSet& cs, const SelectorLayout& lay, std::string& where) {
  const int total_bits =
      std::accumulate(lay.group_bits.begin(), lay.group_bits.end(), 0);
  const int nvars = lay.n + lay.k + total_bits;
  std::vector<std::uint8_t> values(static_cast<std::size_t>(nvars) + 1, 0);
  std::vector<int> code(static_cast<std::size_t>(lay.k), 0);
  for (std::uint32_t bits = 0; bits < (std::uint32_t{1} << total_bits); ++bits) {
    int off = 0;
    bool all_valid = true;
    for (int j = 0; j < lay.k; ++j) {
      code[static_cast<std::size_t>(j)] =
          static_cast<int>((bits >> off) & ((std::uint32_t{1} << lay.group_bits[static_cast<std::size_t>(j)]) - 1));
      off += lay.group_bits[static_cast<std::size_t>(j)];
      all_valid = all_valid && code[static_cast<std::size_t>(j)] < lay.group_pool[static_cast<std::size_t>(j)];
    }
    for (int i = 0; i < total_bits; ++i)
      values[static_cast<std::size_t>(lay.n + lay.k + i + 1)] = (bits >> i) & 1;
    for (std::uint32_t pool = 0; pool < (std::uint32_t{1} << lay.n); ++pool) {
      for (int i = 0; i < lay.n; ++i)
        values[static_cast<std::size_t>(i + 1)] = (pool >> i) & 1;
      for (std::uint32_t outs = 0; outs < (std::uint32_t{1} << lay.k); ++outs) {
        bool expect = all_valid;
        for (int j = 0; j < lay.k; ++j) {
          values[static_cast<std::size_t>(lay.n + j + 1)] = (outs >> j) & 1;
          expect = expect && ((outs >> j) & 1) == ((pool >> code[static_cast<std::size_t>(j)]) & 1);
        }
        if (cs.satisfied_by(values) != expect) {
          where = "bits=" + std::to_string(bits) + " pool=" + std::to_string(pool) +
                  " outs=" + std::to_string(outs);
          return false;
        }
      }
    }
  }
  return true;
}

// criterion 4: every gate encoding equals its semantic truth table under
// exhaustive enumeration of all involved variables.
bool check_encoding_equivalence(Ctx& ctx) {
  // LUTs up to arity 4: all tables, all minterms, both output values.
  for (int k = 1; k <= 4; ++k) {
    Primitive lut;
    lut.kind = PrimitiveKind::lut;
    const int table_bits = 1 << k;
    VarMap vars(static_cast<std::size_t>(k + table_bits + 1));
    for (int i = 0; i < k; ++i) {
      lut.inputs.push_back(i);
      vars.bind(i, i + 1);
    }
    for (int t = 0; t < table_bits; ++t) {
      lut.config.push_back(k + t);
      vars.bind(k + t, k + t + 1);
    }
    lut.outputs = {k + table_bits};
    vars.bind(k + table_bits, k + table_bits + 1);
    ClauseSet cs;
    cs.reserve_vars(k + table_bits + 1);
    encode_lut(lut, vars, cs);

    std::vector<std::uint8_t> values(static_cast<std::size_t>(k + table_bits + 1) + 1, 0);
    for (std::uint64_t table = 0; table < (std::uint64_t{1} << table_bits); ++table) {
      for (int t = 0; t < table_bits; ++t)
        values[static_cast<std::size_t>(k + t + 1)] = (table >> t) & 1;
      for (std::uint32_t m = 0; m < (std::uint32_t{1} << k); ++m) {
        for (int i = 0; i < k; ++i)
          values[static_cast<std::size_t>(i + 1)] = (m >> i) & 1;
        for (int o = 0; o <= 1; ++o) {
          values[static_cast<std::size_t>(k + table_bits + 1)] = static_cast<std::uint8_t>(o);
          const bool expect = o == static_cast<int>((table >> m) & 1);
          if (cs.satisfied_by(values) != expect)
            return ctx.fail("lut k=" + std::to_string(k) + " table=" + std::to_string(table) +
                            " minterm=" + std::to_string(m));
        }
      }
    }
  }

  // Carry cells: mux (out = sel ? ci : di) and xor (out = a ^ b).
  for (const PrimitiveKind kind : {PrimitiveKind::muxcy, PrimitiveKind::xorcy}) {
    Primitive prim;
    prim.kind = kind;
    const int arity = kind == PrimitiveKind::muxcy ? 3 : 2;
    VarMap vars(static_cast<std::size_t>(arity + 1));
    for (int i = 0; i < arity; ++i) {
      prim.inputs.push_back(i);
      vars.bind(i, i + 1);
    }
    prim.outputs = {arity};
    vars.bind(arity, arity + 1);
    ClauseSet cs;
    cs.reserve_vars(arity + 1);
    encode_carry_cell(prim, vars, cs);
    std::vector<std::uint8_t> values(static_cast<std::size_t>(arity + 1) + 1, 0);
    for (std::uint32_t a = 0; a < (std::uint32_t{1} << (arity + 1)); ++a) {
      for (int i = 0; i <= arity; ++i)
        values[static_cast<std::size_t>(i + 1)] = (a >> i) & 1;
      const int in0 = a & 1, in1 = (a >> 1) & 1;
      const int semantic = kind == PrimitiveKind::muxcy ? (in0 ? in1 : (a >> 2) & 1)
                                                        : (in0 ^ in1);
      const bool expect = static_cast<int>((a >> arity) & 1) == semantic;
      if (cs.satisfied_by(values) != expect)
        return ctx.fail(std::string(to_string(kind)) + " assignment " + std::to_string(a));
    }
  }

  // Single mux, then the three selection encodings over every pool/output
  // shape in range.  Codes past the reachable pool must block the clause set.
  for (int n = 1; n <= 6; ++n) {
    const int bits = ceil_log2(n);
    std::vector<int> pool_vars, bit_vars;
    for (int i = 0; i < n; ++i)
      pool_vars.push_back(i + 1);
    for (int i = 0; i < bits; ++i)
      bit_vars.push_back(n + 2 + i);
    ClauseSet cs;
    cs.reserve_vars(n + 1 + bits);
    encode_cmux(pool_vars, n + 1, bit_vars, cs);
    SelectorLayout lay{n, 1, {bits}, {n}};
    std::string where;
    if (!sweep_grouped_selector(cs, lay, where))
      return ctx.fail("cmux n=" + std::to_string(n) + " at " + where);
  }

  for (int n = 1; n <= 6; ++n) {
    for (int k = 1; k <= 4; ++k) {
      std::vector<int> pool_vars, out_vars;
      for (int i = 0; i < n; ++i)
        pool_vars.push_back(i + 1);
      for (int j = 0; j < k; ++j)
        out_vars.push_back(n + j + 1);

      {
        SelectorLayout lay{n, k, {}, {}};
        std::vector<int> bit_vars;
        for (int j = 0; j < k; ++j) {
          lay.group_bits.push_back(ceil_log2(n));
          lay.group_pool.push_back(n);
        }
        const int total = k * ceil_log2(n);
        for (int i = 0; i < total; ++i)
          bit_vars.push_back(n + k + i + 1);
        ClauseSet cs;
        cs.reserve_vars(n + k + total);
        encode_naive_cmux(pool_vars, out_vars, bit_vars, cs);
        std::string where;
        if (!sweep_grouped_selector(cs, lay, where))
          return ctx.fail("naive n=" + std::to_string(n) + " k=" + std::to_string(k) + " at " +
                          where);
      }

      if (k > n)
        continue; // shrinking and choose select without repetition

      {
        SelectorLayout lay{n, k, {}, {}};
        std::vector<int> bit_vars;
        int total = 0;
        for (int j = 0; j < k; ++j) {
          lay.group_bits.push_back(ceil_log2(n - j));
          lay.group_pool.push_back(n - j);
          total += ceil_log2(n - j);
        }
        for (int i = 0; i < total; ++i)
          bit_vars.push_back(n + k + i + 1);
        ClauseSet cs;
        cs.reserve_vars(n + k + total);
        encode_shrinking_cmux(pool_vars, out_vars, bit_vars, cs);
        std::string where;
        if (!sweep_grouped_selector(cs, lay, where))
          return ctx.fail("shrinking n=" + std::to_string(n) + " k=" + std::to_string(k) +
                          " at " + where);
      }

      {
        const std::uint64_t combos = binomial(n, k);
        const int bits = ceil_log2(static_cast<int>(combos));
        std::vector<int> bit_vars;
        for (int i = 0; i < bits; ++i)
          bit_vars.push_back(n + k + i + 1);
        ClauseSet cs;
        cs.reserve_vars(n + k + bits);
        encode_choose(pool_vars, out_vars, bit_vars, cs);
        const int nvars = n + k + bits;
        std::vector<std::uint8_t> values(static_cast<std::size_t>(nvars) + 1, 0);
        for (std::uint32_t code = 0; code < (std::uint32_t{1} << bits); ++code) {
          for (int i = 0; i < bits; ++i)
            values[static_cast<std::size_t>(n + k + i + 1)] = (code >> i) & 1;
          const bool valid = code < combos;
          std::vector<int> comb;
          if (valid)
            comb = combination_unrank(code, n, k);
          for (std::uint32_t pool = 0; pool < (std::uint32_t{1} << n); ++pool) {
            for (int i = 0; i < n; ++i)
              values[static_cast<std::size_t>(i + 1)] = (pool >> i) & 1;
            for (std::uint32_t outs = 0; outs < (std::uint32_t{1} << k); ++outs) {
              bool expect = valid;
              for (int j = 0; j < k; ++j) {
                values[static_cast<std::size_t>(n + j + 1)] = (outs >> j) & 1;
                if (valid)
                  expect = expect &&
                           ((outs >> j) & 1) ==
                               ((pool >> comb[static_cast<std::size_t>(j)]) & 1);
              }
              if (cs.satisfied_by(values) != expect)
                return ctx.fail("choose n=" + std::to_string(n) + " k=" + std::to_string(k) +
                                " code=" + std::to_string(code) + " pool=" +
                                std::to_string(pool) + " outs=" + std::to_string(outs));
            }
          }
        }
      }
    }
  }
  return true;
}

CircuitModel two_input_lut_over_three() {
  CircuitModel m;
  const int a = m.add_signal(SignalKind::input, "a");
  const int b = m.add_signal(SignalKind::input, "b");
  const int c = m.add_signal(SignalKind::input, "c");
  m.input_word = {a, b, c};
  std::vector<int> lut_in;
  for (int i = 0; i < 2; ++i) {
    Primitive sel;
    sel.kind = PrimitiveKind::cmux;
    sel.inputs = {a, b, c};
    for (int j = 0; j < 2; ++j)
      sel.config.push_back(m.add_signal(
          SignalKind::config, "in" + std::to_string(i) + "_sel[" + std::to_string(j) + "]"));
    sel.outputs = {m.add_signal(SignalKind::node, "in" + std::to_string(i))};
    lut_in.push_back(sel.outputs[0]);
    m.primitives.push_back(sel);
  }
  Primitive lut;
  lut.kind = PrimitiveKind::lut;
  lut.inputs = lut_in;
  for (int t = 0; t < 4; ++t)
    lut.config.push_back(m.add_signal(SignalKind::config, "lut[" + std::to_string(t) + "]"));
  lut.outputs = {m.add_signal(SignalKind::node, "out")};
  m.primitives.push_back(lut);
  m.outputs = {lut.outputs[0]};
  m.validate();
  return m;
}

// criterion 5: the embedded decision procedure agrees with brute-force
// enumeration on 50 randomized problems, two of them with known answers
// (a 2-input LUT cannot implement 3-input majority but can implement xor).
bool check_against_brute_force(Ctx& ctx) {
  std::mt19937_64 rng(0x5eed2026);
  std::uniform_int_distribution<int> nc_dist(1, 12);
  std::uniform_int_distribution<int> nx_dist(1, 4);
  std::uniform_int_distribution<int> nn_dist(1, 12);
  int checked = 0;
  int sat_seen = 0;

  for (int i = 0; i < 48; ++i) {
    const int nc = nc_dist(rng);
    const int nx = nx_dist(rng);
    const int nn = nn_dist(rng);
    std::uniform_int_distribution<int> clause_dist(2, 2 * (nc + nx + nn));
    const QbfProblem p = testing::random_qbf(rng, nc, nx, nn, clause_dist(rng));
    const bool want = testing::qbf_brute_force(p);
    const SolveStatus got = solve_embedded(p).status;
    if (got != (want ? SolveStatus::sat : SolveStatus::unsat))
      return ctx.fail("random instance " + std::to_string(i) + ": embedded says " +
                      to_string(got) + ", brute force says " + (want ? "sat" : "unsat"));
    sat_seen += want ? 1 : 0;
    ++checked;
  }

  const CircuitModel model = two_input_lut_over_three();
  const QbfProblem majority =
      assemble(model, TargetFunction::truth_table(3, 1, {0, 0, 0, 1, 0, 1, 1, 1}));
  if (testing::qbf_brute_force(majority) || solve_embedded(majority).status != SolveStatus::unsat)
    return ctx.fail("majority-of-3 must be unsat for a 2-input LUT");
  ++checked;

  const QbfProblem xor_ab =
      assemble(model, TargetFunction::truth_table(3, 1, {0, 1, 1, 0, 0, 1, 1, 0}));
  if (!testing::qbf_brute_force(xor_ab) || solve_embedded(xor_ab).status != SolveStatus::sat)
    return ctx.fail("xor of two selected inputs must be sat");
  ++checked;

  if (checked != 50)
    return ctx.fail("expected 50 instances, ran " + std::to_string(checked));
  ctx.note("50 instances in agreement, " + std::to_string(sat_seen + 1) + " sat / " +
           std::to_string(48 - sat_seen + 1) + " unsat");
  return true;
}

bool problems_equal(const QbfProblem& a, const QbfProblem& b, std::string& why) {
  if (a.config_vars != b.config_vars || a.input_vars != b.input_vars ||
      a.node_vars != b.node_vars) {
    why = "prefix blocks differ";
    return false;
  }
  if (a.var_count() != b.var_count()) {
    why = "variable counts differ";
    return false;
  }
  if (a.symbols.size() != b.symbols.size()) {
    why = "symbol tables differ in size";
    return false;
  }
  for (std::size_t i = 0; i < a.symbols.size(); ++i) {
    if (a.symbols[i].role != b.symbols[i].role || a.symbols[i].name != b.symbols[i].name) {
      why = "symbol " + std::to_string(i + 1) + " differs";
      return false;
    }
  }
  if (a.matrix.size() != b.matrix.size()) {
    why = "clause counts differ";
    return false;
  }
  for (std::size_t i = 0; i < a.matrix.size(); ++i) {
    const auto ca = a.matrix.clause(i);
    const auto cb = b.matrix.clause(i);
    if (!std::equal(ca.begin(), ca.end(), cb.begin(), cb.end())) {
      why = "clause " + std::to_string(i) + " differs";
      return false;
    }
  }
  return true;
}

// criterion 6: parse inverts write on the benchmark set and random problems,
// and a second write pass reproduces the first byte for byte.
bool check_round_trip(Harness& h, Ctx& ctx, const fs::path& set_dir) {
  fs::path dir = set_dir;
  if (dir.empty() || !fs::exists(dir / "manifest.tsv")) {
    dir = h.dir() / "set_c6";
    const RunResult r = h.run("generate --testset -o '" + dir.string() + "'");
    if (r.exit_code != 0)
      return ctx.fail("generate exited " + std::to_string(r.exit_code));
  }

  for (const auto& name : testset_names()) {
    const std::string bytes = read_file(dir / name);
    std::istringstream in0(bytes);
    const QbfProblem p = parse_qdimacs(in0);
    const std::string first = to_qdimacs_string(p);
    if (first != bytes)
      return ctx.fail(name + ": rewrite does not reproduce the file");
    std::istringstream in1(first);
    const QbfProblem p2 = parse_qdimacs(in1);
    std::string why;
    if (!problems_equal(p, p2, why))
      return ctx.fail(name + ": " + why);
    if (to_qdimacs_string(p2) != first)
      return ctx.fail(name + ": second write pass changed bytes");
  }

  std::mt19937_64 rng(1182);
  std::uniform_int_distribution<int> nc_dist(1, 12);
  std::uniform_int_distribution<int> nx_dist(1, 4);
  std::uniform_int_distribution<int> nn_dist(1, 12);
  for (int i = 0; i < 20; ++i) {
    const int nc = nc_dist(rng);
    const int nx = nx_dist(rng);
    const int nn = nn_dist(rng);
    std::uniform_int_distribution<int> clause_dist(1, 2 * (nc + nx + nn));
    const QbfProblem p = testing::random_qbf(rng, nc, nx, nn, clause_dist(rng));
    const std::string first = to_qdimacs_string(p);
    std::istringstream in(first);
    const QbfProblem p2 = parse_qdimacs(in);
    std::string why;
    if (!problems_equal(p, p2, why))
      return ctx.fail("random problem " + std::to_string(i) + ": " + why);
    if (to_qdimacs_string(p2) != first)
      return ctx.fail("random problem " + std::to_string(i) + ": rewrite changed bytes");
  }
  return true;
}

// criterion 7: the documented pipeline runs clean for width 4: generate and
// stats exit 0, solve reports SAT (exit 10) and decodes, verify exits 0.
bool check_cli_pipeline(Harness& h, Ctx& ctx) {
  for (const char* e : encoding_names) {
    const std::string base = (h.dir() / ("c7_add4_" + std::string(e))).string();
    const RunResult gen = h.run("generate --width 4 --encoding " + std::string(e) + " -o '" +
                                base + ".qdimacs' --model-out '" + base + ".json'");
    if (gen.exit_code != 0)
      return ctx.fail(std::string(e) + ": generate exited " + std::to_string(gen.exit_code));
    const RunResult stats = h.run("stats '" + base + ".qdimacs'");
    if (stats.exit_code != 0)
      return ctx.fail(std::string(e) + ": stats exited " + std::to_string(stats.exit_code));
    const RunResult solve = h.run("solve '" + base + ".qdimacs' --embedded --timeout 300 --decode '" +
                                  base + ".json' -o '" + base + "_cfg.json'");
    if (solve.exit_code != 10)
      return ctx.fail(std::string(e) + ": solve exited " + std::to_string(solve.exit_code) +
                      " (want 10)");
    const RunResult verify =
        h.run("verify --model '" + base + ".json' --config '" + base + "_cfg.json'");
    if (verify.exit_code != 0)
      return ctx.fail(std::string(e) + ": verify exited " + std::to_string(verify.exit_code));
  }
  return true;
}

} // namespace

int main(int argc, char** argv) {
  if (argc != 3) {
    std::fprintf(stderr, "usage: acceptance <qbfmap-cli> <golden-dir>\n");
    return 2;
  }

  Harness harness(argv[1], argv[2]);
  fs::path testset_dir;
  int failures = 0;

  const auto report = [&](int number, const char* label, bool ok, double seconds,
                          const Ctx& ctx) {
    std::printf("criterion %d %-36s %s (%s)%s\n", number, label, ok ? "PASS" : "FAIL",
                fmt_seconds(seconds).c_str(),
                ctx.detail.empty() ? "" : ("  " + ctx.detail).c_str());
    for (const auto& line : ctx.notes)
      std::printf("    %s\n", line.c_str());
    std::fflush(stdout);
    if (!ok)
      ++failures;
  };

  const auto run_criterion = [&](int number, const char* label, auto&& body,
                                 double budget = 0.0) {
    Ctx ctx;
    bool ok = false;
    const auto t0 = std::chrono::steady_clock::now();
    try {
      ok = body(ctx);
    } catch (const std::exception& e) {
      ctx.detail = e.what();
      ok = false;
    }
    const double dt = seconds_since(t0);
    if (ok && budget > 0.0 && dt >= budget) {
      ok = false;
      ctx.detail = "exceeded " + fmt_seconds(budget) + " budget";
    }
    report(number, label, ok, dt, ctx);
  };

  run_criterion(1, "test set regeneration", [&](Ctx& ctx) {
    return check_testset_regeneration(harness, ctx, testset_dir);
  });
  run_criterion(2, "width-4 embedded satisfiability", [&](Ctx& ctx) {
    return check_desk_scale_sat(harness, ctx);
  });
  run_criterion(3, "selector bit-count ordering", [&](Ctx& ctx) {
    return check_bit_count_ordering(ctx);
  }, 1.0);
  run_criterion(4, "encoding truth-table equivalence", [&](Ctx& ctx) {
    return check_encoding_equivalence(ctx);
  }, 30.0);
  run_criterion(5, "embedded solver vs brute force", [&](Ctx& ctx) {
    return check_against_brute_force(ctx);
  }, 120.0);
  run_criterion(6, "format round-trip", [&](Ctx& ctx) {
    return check_round_trip(harness, ctx, testset_dir);
  });
  run_criterion(7, "CLI pipeline", [&](Ctx& ctx) {
    return check_cli_pipeline(harness, ctx);
  });

  std::printf("%d of 7 criteria passed\n", 7 - failures);
  return failures;
}
