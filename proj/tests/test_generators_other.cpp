#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <stdexcept>
#include <vector>

#include "chainmetric/generators.hpp"
#include "chainmetric/oracles.hpp"
#include "oracle_utils.hpp"

using namespace chainmetric;

namespace {

PointId locate(const FiniteMetricSpace& s, const SparsePoint& p) {
  for (PointId i = 0; i < s.size(); ++i)
    if (s.point(i) == p) return i;
  REQUIRE(false);
  return 0;
}

}  // namespace

TEST_CASE("comb at h = 1/2 is enumerable by hand") {
  FiniteMetricSpace c = generate_comb(0.5);
  // base {0, 1/2, 1} plus two fresh points on each of the teeth at
  // x = 0, 1, 1/2
  CHECK(c.size() == 9);
  CHECK(c.landmark("p") == locate(c, planar_point(0.0, 0.0)));
  CHECK(c.landmark("tip") == locate(c, planar_point(0.0, 1.0)));
  CHECK(c.kind() == MetricKind::euclidean);

  PointId tip = c.landmark("tip");
  PointId far_top = locate(c, planar_point(1.0, 1.0));
  CHECK(c.distance(tip, far_top) == 1.0);  // ambient metric ignores the comb

  CHECK_THROWS_AS(generate_comb(0.0), std::invalid_argument);
  CHECK_THROWS_AS(generate_comb(0.7), std::invalid_argument);
}

TEST_CASE("comb teeth sampling and path-length reference") {
  double h = 0.25;
  FiniteMetricSpace c = generate_comb(h);
  AnalyticOracle o = analytic_oracle_comb(c);
  PointId tip = c.landmark("tip");

  // tooth at x = 1/k exists for every k <= 1/h and is sampled at <= h.
  // Its root (1/k, 0) belongs to the base piece whenever 1/k is a base
  // sample, so the tooth's own rows may start one sample up.
  for (int k = 1; k <= 4; ++k) {
    std::vector<PointId> tooth = piece_path(c, 1 + k);
    REQUIRE(tooth.size() >= 2);
    CHECK(c.point(tooth.front()).coord(1) == 1.0 / k);
    CHECK(c.point(tooth.front()).coord(2) <= h + 1e-12);
    CHECK(c.point(tooth.back()) == planar_point(1.0 / k, 1.0));
    for (std::size_t i = 0; i + 1 < tooth.size(); ++i)
      CHECK(c.distance(tooth[i], tooth[i + 1]) <= h + 1e-12);

    // walking down the tooth, along the base, and up to the tip
    PointId top = tooth.back();
    CHECK(o.dbar(tip, top)->value() == doctest::Approx(2.0 + 1.0 / k));
    CHECK(o.d0(tip, top)->value() == o.dbar(tip, top)->value());
    CHECK(o.d(tip, top)->value() == 1.0 / k);  // ambient shortcut
  }

  // same tooth: plain height difference
  PointId mid = locate(c, planar_point(0.0, 0.5));
  CHECK(o.dbar(tip, mid)->value() == 0.5);
  // base to base: no teeth involved
  PointId b1 = locate(c, planar_point(0.25, 0.0));
  PointId b2 = locate(c, planar_point(0.75, 0.0));
  CHECK(o.dbar(b1, b2)->value() == 0.5);
}

TEST_CASE("slit plane grid and crossing predicate") {
  CHECK_THROWS_AS(generate_slit_plane(0.3, 1.5), std::invalid_argument);
  CHECK_THROWS_AS(generate_slit_plane(0.5, 1.0), std::invalid_argument);

  FiniteMetricSpace s = generate_slit_plane(0.5, 1.5);
  // 7 x 7 grid minus the five removed slit points
  CHECK(s.size() == 44);
  PointId p = s.landmark("p"), q = s.landmark("q");
  CHECK(s.point(p) == planar_point(-1.0, 0.0));
  CHECK(s.point(q) == planar_point(1.0, 0.0));
  for (PointId i = 0; i < s.size(); ++i) {
    double x = s.point(i).coord(1), y = s.point(i).coord(2);
    CHECK(!(x == 0.0 && std::fabs(y) <= 1.0));  // slit really removed
  }

  CHECK(slit_crossing(planar_point(-1, 0), planar_point(1, 0)));
  CHECK(!slit_crossing(planar_point(-1, 2), planar_point(1, 2)));
  CHECK(!slit_crossing(planar_point(-1, 0), planar_point(-1, 2)));
  CHECK(slit_crossing(planar_point(0, 1.5), planar_point(0, -1.5)));
  CHECK(!slit_crossing(planar_point(0, 1.5), planar_point(0, 1.25)));
  CHECK(!slit_crossing(planar_point(0, 1.5), planar_point(1, 0)));
  CHECK(!slit_crossing(planar_point(0, 1.5), planar_point(0, 1.5)));
  // touching the slit end from the side counts as a crossing
  CHECK(slit_crossing(planar_point(-0.5, 1), planar_point(0.5, 1)));
}

TEST_CASE("slit plane reference metrics") {
  FiniteMetricSpace s = generate_slit_plane(0.5, 1.5);
  AnalyticOracle o = analytic_oracle_slit(s);
  PointId p = s.landmark("p"), q = s.landmark("q");

  CHECK(o.d(p, q)->value() == 2.0);
  CHECK(o.d0(p, q)->value() == 2.0);  // chains tunnel through the cut
  CHECK(o.dbar(p, q)->value() == doctest::Approx(2.0 * std::sqrt(2.0)));

  // unobstructed pair: intrinsic = ambient
  PointId a = locate(s, planar_point(-1.0, 1.0));
  CHECK(o.dbar(p, a)->value() == 1.0);

  // aligned pair on the cut line: both detours tie by collinearity
  PointId u = locate(s, planar_point(0.0, 1.5));
  PointId v = locate(s, planar_point(0.0, -1.5));
  CHECK(o.dbar(u, v)->value() == doctest::Approx(3.0));
}

TEST_CASE("rational grid") {
  CHECK_THROWS_AS(generate_rational_grid(0.3), std::invalid_argument);

  FiniteMetricSpace g = generate_rational_grid(0.25);
  CHECK(g.size() == 5);
  CHECK(g.landmark("p") == 0);
  CHECK(g.landmark("q") == 4);
  CHECK(g.point(0) == SparsePoint::make({}));
  CHECK(g.point(2) == SparsePoint::make({{1, 0.5}}));
  CHECK(g.meta(3).t == 0.75);

  AnalyticOracle o = analytic_oracle_rational(g);
  CHECK(o.d(0, 4)->value() == 1.0);
  CHECK(o.d0(0, 4)->value() == 1.0);
  CHECK(o.dbar(0, 4)->is_infinite());  // no paths between distinct rationals
  CHECK(o.dbar(2, 2)->value() == 0.0);
  CHECK(g.distance(1, 3) == 0.5);
}

TEST_CASE("multi-edge graph, single arc") {
  CHECK_THROWS_AS(generate_multi_edge(0, 0.5), std::invalid_argument);
  CHECK_THROWS_AS(generate_multi_edge(2, 0.9), std::invalid_argument);

  FiniteMetricSpace g = generate_multi_edge(1, 0.5);
  // p, q, and interior samples of one arc of length 2 at spacing 1/2
  CHECK(g.size() == 5);
  CHECK(g.distance(0, 1) == 2.0);
  CHECK(g.distance(0, 2) == 0.5);   // first interior sample
  CHECK(g.distance(2, 4) == 1.0);   // along the arc
  CHECK(g.distance(4, 1) == 0.5);
  CHECK(g.distance(0, 4) == 1.5);
}

TEST_CASE("multi-edge closed form equals shortest paths over the sample") {
  FiniteMetricSpace g = generate_multi_edge(3, 0.25);
  REQUIRE(g.matrix());

  // adjacency-only graph: consecutive samples along each arc, junctions at
  // p and q; its path closure must reproduce every pairwise distance
  DistanceMatrix m(g.size());
  PointId id = 2;
  for (int k = 1; k <= 3; ++k) {
    double arc_len = 1.0 + 1.0 / k;
    int n_steps = static_cast<int>(std::ceil(arc_len / 0.25 - 1e-9));
    PointId prev = 0;  // p
    for (int i = 1; i < n_steps; ++i, ++id) {
      m.set(prev, id, g.distance(prev, id));
      prev = id;
    }
    m.set(prev, 1, g.distance(prev, 1));  // close the arc at q
  }
  REQUIRE(id == g.size());
  chainmetric::testing::fw_complete(m);
  CHECK(entrywise_equal(m, *g.matrix(), 1e-12));

  ValidationReport r = validate_metric(*g.matrix());
  CHECK(r.valid());
  CHECK(r.exhaustive);

  AnalyticOracle o = analytic_oracle_multi_edge(g);
  CHECK(o.d(0, 1)->value() == g.distance(0, 1));
  CHECK(o.d0(0, 1)->value() == g.distance(0, 1));
  CHECK(o.dbar(0, 1)->value() == g.distance(0, 1));
  CHECK(g.distance(0, 1) == doctest::Approx(4.0 / 3));
}

TEST_CASE("generator dispatch by name") {
  FiniteMetricSpace c = generate_named("comb", {{"h", 0.5}});
  CHECK(c.size() == 9);
  CHECK_THROWS_AS(generate_named("nope", {}), std::invalid_argument);
  CHECK_THROWS_AS(generate_named("y-spider", {{"h", 0.25}}),
                  nlohmann::json::exception);
}
