#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <unistd.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <limits>
#include <stdexcept>
#include <string>

#include "chainmetric/generators.hpp"
#include "chainmetric/io.hpp"

using namespace chainmetric;
namespace fs = std::filesystem;

namespace {

// per-process scratch dir so parallel ctest runs don't collide
fs::path scratch() {
  static fs::path dir = [] {
    fs::path d = fs::temp_directory_path() /
                 ("chainmetric_io_" + std::to_string(::getpid()));
    fs::create_directories(d);
    return d;
  }();
  return dir;
}

std::string slurp(const fs::path& p) {
  std::ifstream is(p, std::ios::binary);
  REQUIRE(bool(is));
  return std::string(std::istreambuf_iterator<char>(is), {});
}

void spit(const fs::path& p, const std::string& bytes) {
  std::ofstream os(p, std::ios::binary | std::ios::trunc);
  os << bytes;
}

}  // namespace

TEST_CASE("matrix file round-trips bitwise, infinity included") {
  DistanceMatrix m(4);
  m.set(0, 1, 0.125);
  m.set(0, 2, 2.5);
  m.set(1, 2, 2.375);
  // point 3 stays unreachable: +inf entries must survive the trip
  fs::path p = scratch() / "roundtrip.dmx";
  write_matrix(p.string(), m);
  DistanceMatrix back = read_matrix(p.string());
  CHECK(back == m);
  CHECK(back.at(0, 3).is_infinite());

  // header: 4 magic bytes + 8 size bytes, then 10 doubles for n = 4
  CHECK(fs::file_size(p) == 4 + 8 + 10 * 8);
}

TEST_CASE("matrix file rejects malformed input") {
  fs::path good = scratch() / "good.dmx";
  DistanceMatrix m(3);
  m.set(0, 1, 1.0);
  m.set(1, 2, 1.0);
  m.set(0, 2, 2.0);
  write_matrix(good.string(), m);
  std::string bytes = slurp(good);

  SUBCASE("bad magic") {
    std::string bad = bytes;
    bad[0] = 'X';
    fs::path p = scratch() / "badmagic.dmx";
    spit(p, bad);
    CHECK_THROWS_AS(read_matrix(p.string()), std::runtime_error);
  }
  SUBCASE("truncated entries") {
    fs::path p = scratch() / "trunc.dmx";
    spit(p, bytes.substr(0, bytes.size() - 5));
    CHECK_THROWS_AS(read_matrix(p.string()), std::runtime_error);
  }
  SUBCASE("trailing data") {
    fs::path p = scratch() / "trailing.dmx";
    spit(p, bytes + '\0');
    CHECK_THROWS_AS(read_matrix(p.string()), std::runtime_error);
  }
  SUBCASE("nonzero diagonal") {
    std::string bad = bytes;
    // first stored double is entry (0,0); overwrite with 1.0
    double one = 1.0;
    for (int i = 0; i < 8; ++i)
      bad[12 + i] = reinterpret_cast<const char*>(&one)[i];
    fs::path p = scratch() / "diag.dmx";
    spit(p, bad);
    CHECK_THROWS_AS(read_matrix(p.string()), std::runtime_error);
  }
  SUBCASE("missing file") {
    CHECK_THROWS_AS(read_matrix((scratch() / "nope.dmx").string()),
                    std::runtime_error);
  }
}

TEST_CASE("csv uses inf literal and full symmetric layout") {
  DistanceMatrix m(2);
  fs::path p = scratch() / "disc.csv";
  write_matrix_csv(p.string(), m);
  CHECK(slurp(p) == "0,inf\ninf,0\n");

  m.set(0, 1, 0.5);
  write_matrix_csv(p.string(), m);
  CHECK(slurp(p) == "0,0.5\n0.5,0\n");
}

TEST_CASE("coordinate space round-trips through json") {
  FiniteMetricSpace y = generate_y(2, 0.25);
  fs::path p = scratch() / "y.json";
  save_space(p.string(), y);
  FiniteMetricSpace back = load_space(p.string());

  REQUIRE(back.size() == y.size());
  CHECK(back.kind() == y.kind());
  CHECK(back.generator() == "y-spider");
  CHECK(back.landmark("p") == y.landmark("p"));
  CHECK(back.landmark("q") == y.landmark("q"));
  CHECK(back.resolution() == y.resolution());
  for (PointId i = 0; i < y.size(); ++i) {
    CHECK(back.point(i) == y.point(i));
    CHECK(back.meta(i).piece == y.meta(i).piece);
    CHECK(back.meta(i).segment == y.meta(i).segment);
    CHECK(back.meta(i).t == y.meta(i).t);
  }

  // saving the loaded copy reproduces the file byte for byte
  fs::path p2 = scratch() / "y2.json";
  save_space(p2.string(), back);
  CHECK(slurp(p2) == slurp(p));
}

TEST_CASE("matrix space writes a sidecar and reloads it") {
  FiniteMetricSpace g = generate_multi_edge(2, 0.5);
  REQUIRE(g.matrix());  // small graph: explicit matrix
  fs::path p = scratch() / "edges.json";
  save_space(p.string(), g);
  CHECK(fs::exists(scratch() / "edges.dmx"));

  FiniteMetricSpace back = load_space(p.string());
  REQUIRE(back.size() == g.size());
  REQUIRE(back.matrix());
  CHECK(*back.matrix() == *g.matrix());
  CHECK(back.landmark("p") == 0);
  CHECK(back.landmark("q") == 1);
  for (PointId i = 0; i < g.size(); ++i)
    CHECK(back.distance(0, i) == g.distance(0, i));
}

TEST_CASE("oracle space reloads by regeneration") {
  FiniteMetricSpace g = generate_multi_edge(64, 1.0 / 64);
  REQUIRE(!g.matrix());  // big graph: lazy distances, no sidecar
  fs::path p = scratch() / "bigedges.json";
  save_space(p.string(), g);
  CHECK(!fs::exists(scratch() / "bigedges.dmx"));

  FiniteMetricSpace back = load_space(p.string());
  REQUIRE(back.size() == g.size());
  CHECK(back.distance(0, 1) == g.distance(0, 1));
  PointId mid = g.size() / 2;
  CHECK(back.distance(mid, mid + 1) == g.distance(mid, mid + 1));
  CHECK(back.meta(mid).piece == g.meta(mid).piece);
}

TEST_CASE("space file with out-of-order ids is rejected") {
  fs::path p = scratch() / "bad_ids.json";
  spit(p, R"({
    "generator": "", "params": {}, "metric_kind": "sup",
    "points": [{"id": 1, "coords": [[1, 0.5]]}]
  })");
  CHECK_THROWS_AS(load_space(p.string()), std::runtime_error);
}
