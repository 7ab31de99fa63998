#include "qbfmap/testset.hpp"

#include <filesystem>
#include <fstream>
#include <ostream>
#include <stdexcept>

#include "qbfmap/cnf.hpp"
#include "qbfmap/qdimacs.hpp"

namespace qbfmap {

TestSetManifest generate_test_set(const std::string& out_dir,
                                  const std::vector<int>& widths,
                                  const std::vector<SelectionEncoding>& encodings,
                                  int lut_arity, bool carry_out) {
  if (widths.empty())
    throw std::invalid_argument("test set needs at least one width");
  std::filesystem::create_directories(out_dir);

  TestSetManifest manifest;
  for (const int w : widths) {
    const int pool = 2 * w + 2;
    for (const SelectionEncoding enc : encodings) {
      const CircuitModel model = build_carry_chain_adder(w, enc, lut_arity, carry_out);
      const TargetFunction target = TargetFunction::adder(w, carry_out);
      const QbfProblem problem = assemble(model, target);

      TestSetEntry e;
      e.file = "adder" + std::to_string(w) + "_" + to_string(enc) + ".qdimacs";
      e.width = w;
      e.encoding = enc;
      e.config_vars = problem.config_vars.size();
      e.input_vars = problem.input_vars.size();
      e.node_vars = problem.node_vars.size();
      e.clauses = problem.matrix.size();
      e.sel_bits_naive = config_bit_count(SelectionEncoding::naive_cmux, pool, lut_arity);
      e.sel_bits_shrinking =
          config_bit_count(SelectionEncoding::shrinking_cmux, pool, lut_arity);
      e.sel_bits_choose = config_bit_count(SelectionEncoding::choose, pool, lut_arity);

      const std::filesystem::path path = std::filesystem::path(out_dir) / e.file;
      std::ofstream os(path, std::ios::binary);
      if (!os)
        throw std::runtime_error("cannot open " + path.string() + " for writing");
      write_qdimacs(problem, os);
      if (!os)
        throw std::runtime_error("write failed for " + path.string());
      manifest.entries.push_back(std::move(e));
    }
  }

  const std::filesystem::path mpath = std::filesystem::path(out_dir) / "manifest.tsv";
  std::ofstream ms(mpath, std::ios::binary);
  if (!ms)
    throw std::runtime_error("cannot open " + mpath.string() + " for writing");
  write_manifest(ms, manifest);
  if (!ms)
    throw std::runtime_error("write failed for " + mpath.string());
  return manifest;
}

void write_manifest(std::ostream& os, const TestSetManifest& manifest) {
  os << "# file\twidth\tencoding\tconfig_vars\tinput_vars\tnode_vars\tclauses"
        "\tsel_bits_naive\tsel_bits_shrinking\tsel_bits_choose\n";
  for (const TestSetEntry& e : manifest.entries) {
    os << e.file << '\t' << e.width << '\t' << to_string(e.encoding) << '\t'
       << e.config_vars << '\t' << e.input_vars << '\t' << e.node_vars << '\t' << e.clauses
       << '\t' << e.sel_bits_naive << '\t' << e.sel_bits_shrinking << '\t'
       << e.sel_bits_choose << '\n';
  }
}

} // namespace qbfmap
