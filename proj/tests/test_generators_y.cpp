#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "chainmetric/generators.hpp"
#include "chainmetric/oracles.hpp"

using namespace chainmetric;

TEST_CASE("parameter validation") {
  CHECK_THROWS_AS(generate_y(1, 0.25), std::invalid_argument);
  CHECK_THROWS_AS(generate_y(3, 0.3), std::invalid_argument);  // h > 1/(K+1)
  CHECK_THROWS_AS(generate_y(3, 0.0), std::invalid_argument);
  CHECK_THROWS_AS(generate_y(3, -0.1), std::invalid_argument);
}

TEST_CASE("landmarks and shared points") {
  FiniteMetricSpace y = generate_y(3, 0.125);
  PointId p = y.landmark("p"), q = y.landmark("q");
  CHECK(p == 0);
  CHECK(y.point(p) == SparsePoint::make({}));
  CHECK(y.point(q) == SparsePoint::make({{1, 1.0}}));

  // q is shared by all spines but stored once; same for each axis end
  std::map<SparsePoint, int> copies;
  for (PointId i = 0; i < y.size(); ++i) ++copies[y.point(i)];
  for (const auto& [pt, c] : copies) CHECK(c == 1);
  for (int k = 2; k <= 4; ++k)
    CHECK(copies.count(SparsePoint::make({{1, 1.0 / k}})) == 1);

  CHECK(y.distance(p, q) == 1.0);  // sup metric sees only the first axis
  for (int k = 2; k <= 4; ++k) {
    PointId axis = *y.find_by_meta(k, 2, 1.0);
    CHECK(y.distance(p, axis) == 1.0 / k);
  }
}

TEST_CASE("piece paths walk each spine in arc order at spacing <= h") {
  double h = 0.125;
  FiniteMetricSpace y = generate_y(2, h);
  for (int k = 2; k <= 3; ++k) {
    // q itself was first emitted by spine 2, so the other spines' rows
    // start one sample in and q has to be prepended by name
    std::vector<PointId> path =
        piece_path(y, k, k == 2 ? std::string() : std::string("q"));
    REQUIRE(path.size() >= 2);
    CHECK(path.front() == y.landmark("q"));
    CHECK(y.point(path.back()) == SparsePoint::make({{1, 1.0 / k}}));
    double total = 0.0;
    for (std::size_t i = 0; i + 1 < path.size(); ++i) {
      double step = y.distance(path[i], path[i + 1]);
      CHECK(step > 0.0);
      CHECK(step <= h + 1e-12);
      total += step;
    }
    // sampled arc length telescopes to the exact spine length 3 - 1/k
    CHECK(total == doctest::Approx(3.0 - 1.0 / k).epsilon(1e-12));
  }
}

TEST_CASE("the sample is a metric space") {
  FiniteMetricSpace y = generate_y(2, 0.25);
  auto m = std::make_shared<DistanceMatrix>(y.size());
  for (PointId i = 0; i < y.size(); ++i)
    for (PointId j = i + 1; j < y.size(); ++j)
      m->set(i, j, y.distance(i, j));
  ValidationReport r = validate_metric(*m);
  CHECK(r.valid());
  CHECK(r.exhaustive);
}

TEST_CASE("closed-form reference values") {
  FiniteMetricSpace y = generate_y(3, 1.0 / 16);
  AnalyticOracle o = analytic_oracle_y(y);
  PointId p = y.landmark("p"), q = y.landmark("q");

  CHECK(o.d(p, q)->value() == 1.0);
  CHECK(o.d0(p, q)->value() == 3.0);
  CHECK(o.dbar(p, q)->is_infinite());
  CHECK(o.d0(p, p)->value() == 0.0);
  CHECK(o.dbar(q, q)->value() == 0.0);

  for (int k = 2; k <= 4; ++k) {
    // outer corner (1, e_k): arc position 1 from q (meta lives on segment 0)
    PointId corner = *y.find_by_meta(k, 0, 1.0);
    CHECK(o.dbar(q, corner)->value() == 1.0);
    CHECK(o.d0(p, corner)->value() == 4.0);
    // inner corner (1/k, e_k): arc position 2 - 1/k (meta on segment 1)
    PointId inner = *y.find_by_meta(k, 1, 1.0);
    CHECK(o.dbar(q, inner)->value() == doctest::Approx(2.0 - 1.0 / k));
    // axis end: full spine length from q
    PointId axis = *y.find_by_meta(k, 2, 1.0);
    CHECK(o.dbar(q, axis)->value() == doctest::Approx(3.0 - 1.0 / k));
    CHECK(o.d0(p, axis)->value() == doctest::Approx(6.0 - 1.0 / k));
  }

  // cross-spine paths go through q
  PointId a2 = *y.find_by_meta(2, 2, 1.0);
  PointId a3 = *y.find_by_meta(3, 2, 1.0);
  CHECK(o.dbar(a2, a3)->value() ==
        doctest::Approx((3.0 - 0.5) + (3.0 - 1.0 / 3)));
  CHECK(o.d0(a2, a3)->value() == o.dbar(a2, a3)->value());

  // sandwich d <= d0 <= dbar on every pair with published values; the
  // closed forms come from arc positions, the sample from coordinates, so
  // equal pairs may disagree by an ulp and get the shared tolerance
  for (PointId i = 0; i < y.size(); ++i)
    for (PointId j = i + 1; j < y.size(); ++j) {
      ExtReal d = *o.d(i, j), d0 = *o.d0(i, j), db = *o.dbar(i, j);
      REQUIRE(d.is_finite());
      CHECK((d0.is_infinite() || d.value() <= d0.value() + 1e-12));
      CHECK((db.is_infinite() || d0.value() <= db.value() + 1e-12));
    }
}

TEST_CASE("meta addressing matches coordinates") {
  FiniteMetricSpace y = generate_y(2, 0.25);
  // spine 2, outward vertical at height 1/2: the point (1, 1/2 e_2)
  PointId v = *y.find_by_meta(2, 0, 0.5);
  CHECK(y.point(v) == SparsePoint::make({{1, 1.0}, {2, 0.5}}));
  // spine 3, top segment at u = 1/3: x = 1 - (1/3)(2/3) = 7/9
  PointId t = *y.find_by_meta(3, 1, 1.0 / 3);
  CHECK(y.point(t).coord(1) == doctest::Approx(7.0 / 9));
  CHECK(y.point(t).coord(3) == 1.0);
  CHECK(!y.find_by_meta(9, 0, 0.0).has_value());
}
