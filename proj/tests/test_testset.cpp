#include "doctest.h"

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "qbfmap/combin.hpp"
#include "qbfmap/qdimacs.hpp"
#include "qbfmap/testset.hpp"

using namespace qbfmap;

namespace {

namespace fs = std::filesystem;

struct TempDir {
  fs::path path;
  TempDir() {
    char tmpl[] = "/tmp/qbfmap-testset-XXXXXX";
    REQUIRE(::mkdtemp(tmpl) != nullptr);
    path = tmpl;
  }
  ~TempDir() { fs::remove_all(path); }
};

std::string slurp(const fs::path& p) {
  std::ifstream is(p, std::ios::binary);
  REQUIRE(is.good());
  std::ostringstream os;
  os << is.rdbuf();
  return os.str();
}

} // namespace

TEST_SUITE("testset") {

TEST_CASE("defaults cover the four widths and three encodings") {
  CHECK(default_widths() == std::vector<int>{4, 5, 6, 7});
  CHECK(all_encodings().size() == 3);
}

TEST_CASE("one file per encoding, described accurately by the manifest") {
  TempDir dir;
  const TestSetManifest manifest = generate_test_set(dir.path.string(), {4});
  REQUIRE(manifest.entries.size() == 3);
  CHECK(manifest.entries[0].file == "adder4_naive.qdimacs");
  CHECK(manifest.entries[1].file == "adder4_shrinking.qdimacs");
  CHECK(manifest.entries[2].file == "adder4_choose.qdimacs");

  for (const TestSetEntry& e : manifest.entries) {
    CAPTURE(e.file);
    std::ifstream is(dir.path / e.file);
    REQUIRE(is.good());
    const QbfProblem p = parse_qdimacs(is);
    p.validate();
    CHECK(p.config_vars.size() == e.config_vars);
    CHECK(p.input_vars.size() == e.input_vars);
    CHECK(p.node_vars.size() == e.node_vars);
    CHECK(p.matrix.size() == e.clauses);
    CHECK(e.input_vars == 8); // two 4-bit operands
    CHECK(e.width == 4);

    // config count decomposes into per-bit tables, selectors, data-input
    // selectors, plus the initial-carry bit
    const int pool = 2 * e.width + 2;
    const int sel = config_bit_count(e.encoding, pool, 6);
    const std::size_t expected =
        static_cast<std::size_t>(e.width) *
            static_cast<std::size_t>(64 + sel + ceil_log2(pool)) +
        1;
    CHECK(e.config_vars == expected);
  }

  // the selection-bit columns are properties of the width, not of the file
  for (int i = 1; i < 3; ++i) {
    CHECK(manifest.entries[i].sel_bits_naive == manifest.entries[0].sel_bits_naive);
    CHECK(manifest.entries[i].sel_bits_shrinking ==
          manifest.entries[0].sel_bits_shrinking);
    CHECK(manifest.entries[i].sel_bits_choose == manifest.entries[0].sel_bits_choose);
  }
  CHECK(manifest.entries[0].sel_bits_naive >= manifest.entries[0].sel_bits_shrinking);
  CHECK(manifest.entries[0].sel_bits_shrinking >= manifest.entries[0].sel_bits_choose);
}

TEST_CASE("the manifest file mirrors write_manifest output") {
  TempDir dir;
  const TestSetManifest manifest = generate_test_set(dir.path.string(), {4});
  std::ostringstream expected;
  write_manifest(expected, manifest);
  CHECK(slurp(dir.path / "manifest.tsv") == expected.str());
  std::istringstream head(expected.str());
  std::string first;
  std::getline(head, first);
  CHECK(first ==
        "# file\twidth\tencoding\tconfig_vars\tinput_vars\tnode_vars\tclauses"
        "\tsel_bits_naive\tsel_bits_shrinking\tsel_bits_choose");
}

TEST_CASE("generation is deterministic byte for byte") {
  TempDir a, b;
  generate_test_set(a.path.string(), {4});
  generate_test_set(b.path.string(), {4});
  for (const char* name : {"adder4_naive.qdimacs", "adder4_shrinking.qdimacs",
                           "adder4_choose.qdimacs", "manifest.tsv"}) {
    CAPTURE(name);
    CHECK(slurp(a.path / name) == slurp(b.path / name));
  }
}

TEST_CASE("widths whose pool cannot feed the lut are rejected") {
  TempDir dir;
  // width 1 pool holds 4 signals, fewer than the 6 lut inputs; the manifest
  // documents all three encodings per width, so the whole width is refused
  CHECK_THROWS_AS(generate_test_set(dir.path.string(), {1}), std::invalid_argument);
  CHECK_THROWS_AS(generate_test_set(dir.path.string(), {1},
                                    {SelectionEncoding::naive_cmux}),
                  std::invalid_argument);
  // narrower luts fit: pool 4, arity 3
  const TestSetManifest manifest = generate_test_set(
      dir.path.string(), {1}, {SelectionEncoding::naive_cmux}, 3);
  CHECK(manifest.entries.size() == 1);
}

TEST_CASE("an empty width list is refused") {
  TempDir dir;
  CHECK_THROWS_AS(generate_test_set(dir.path.string(), {}), std::invalid_argument);
}

} // TEST_SUITE
