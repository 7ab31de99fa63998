#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "qbfmap/model.hpp"

namespace qbfmap {

struct TestSetEntry {
  std::string file;
  int width = 0;
  SelectionEncoding encoding = SelectionEncoding::naive_cmux;
  std::size_t config_vars = 0;
  std::size_t input_vars = 0;
  std::size_t node_vars = 0;
  std::size_t clauses = 0;
  // Per-LUT selection bits for this width under each encoding, so the gap
  // between the formulations is visible straight from the manifest.
  int sel_bits_naive = 0;
  int sel_bits_shrinking = 0;
  int sel_bits_choose = 0;
};

struct TestSetManifest {
  std::vector<TestSetEntry> entries;
};

inline const std::vector<int>& default_widths() {
  static const std::vector<int> w = {4, 5, 6, 7};
  return w;
}

inline const std::vector<SelectionEncoding>& all_encodings() {
  static const std::vector<SelectionEncoding> e = {SelectionEncoding::naive_cmux,
                                                   SelectionEncoding::shrinking_cmux,
                                                   SelectionEncoding::choose};
  return e;
}

// Writes one QDIMACS file per (width, encoding) pair into out_dir, named
// adder<width>_<encoding>.qdimacs, plus manifest.tsv describing each file.
TestSetManifest generate_test_set(const std::string& out_dir,
                                  const std::vector<int>& widths = default_widths(),
                                  const std::vector<SelectionEncoding>& encodings =
                                      all_encodings(),
                                  int lut_arity = 6, bool carry_out = true);

// Tab-separated, one line per file, leading comment line names the columns.
void write_manifest(std::ostream& os, const TestSetManifest& manifest);

} // namespace qbfmap
