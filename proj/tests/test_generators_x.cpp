#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <stdexcept>
#include <vector>

#include "chainmetric/generators.hpp"
#include "chainmetric/oracles.hpp"

using namespace chainmetric;

namespace {

// polyline length of an id path under the sup metric
double path_length(const FiniteMetricSpace& s, const std::vector<PointId>& p) {
  double total = 0.0;
  for (std::size_t i = 0; i + 1 < p.size(); ++i)
    total += s.distance(p[i], p[i + 1]);
  return total;
}

}  // namespace

TEST_CASE("parameter validation is stricter than the spider's") {
  CHECK_THROWS_AS(generate_x(2, 0.2), std::invalid_argument);  // needs h <= 1/9
  CHECK_THROWS_AS(generate_x(1, 0.05), std::invalid_argument);
  CHECK(generate_x(2, 1.0 / 9).size() > 0);
}

TEST_CASE("contains the spider with identical layout") {
  double h = 1.0 / 16;
  FiniteMetricSpace x = generate_x(3, h);
  FiniteMetricSpace y = generate_y(3, h);
  REQUIRE(x.size() > y.size());
  // the spider points come first, bit for bit, same ids
  for (PointId i = 0; i < y.size(); ++i) {
    CHECK(x.point(i) == y.point(i));
    CHECK(x.meta(i).piece == y.meta(i).piece);
  }
  CHECK(x.landmark("p") == y.landmark("p"));
  CHECK(x.landmark("q") == y.landmark("q"));
}

TEST_CASE("each added curve runs from p to an axis end at calibrated length") {
  double h = 1.0 / 32;
  int K = 4;
  FiniteMetricSpace x = generate_x(K, h);

  for (int k = 2; k <= K + 1; ++k) {
    // curve k starts at p and ends at spine k's axis end; dedup credits
    // both to the spider, so the path needs closing at each end
    std::vector<PointId> curve = piece_path(x, 1000 + k, "p");
    curve.push_back(*x.find_by_meta(k, 2, 1.0));
    REQUIRE(curve.size() >= 3);
    CHECK(curve.front() == x.landmark("p"));
    CHECK(x.point(curve.back()) == SparsePoint::make({{1, 1.0 / k}}));

    // consecutive samples stay within the hop scale
    for (std::size_t i = 0; i + 1 < curve.size(); ++i) {
      double step = x.distance(curve[i], curve[i + 1]);
      CHECK(step > 0.0);
      CHECK(step <= h + 1e-12);
    }

    // the whole point of the construction: polyline length exactly 3 + 1/k
    CHECK(path_length(x, curve) == doctest::Approx(3.0 + 1.0 / k).epsilon(1e-9));

    // envelope: the detour coordinate never exceeds the axis coordinate,
    // so every curve point keeps its sup distance to p equal to max coord
    for (PointId id : curve) {
      double t = x.point(id).coord(1);
      double f = x.point(id).coord(std::uint32_t(k));
      CHECK(std::fabs(f) <= t + 1e-12);
    }
  }
}

TEST_CASE("curve oscillation is finer than the sampling scale") {
  double h = 1.0 / 32;
  FiniteMetricSpace x = generate_x(2, h);
  // amplitude bound 4h holds past the first flank (the first flank is the
  // shoulder descending from the diagonal's endpoint to the axis band)
  int checked = 0;
  for (PointId i = 0; i < x.size(); ++i) {
    const PointMeta& m = x.meta(i);
    if (m.piece < 1000 || m.segment <= 1) continue;
    double f = x.point(i).coord(std::uint32_t(m.piece - 1000));
    CHECK(std::fabs(f) <= 4.0 * h + 1e-12);
    ++checked;
  }
  CHECK(checked > 0);
}

TEST_CASE("reference values") {
  FiniteMetricSpace x = generate_x(3, 1.0 / 32);
  AnalyticOracle o = analytic_oracle_x(x);
  PointId p = x.landmark("p"), q = x.landmark("q");

  CHECK(o.d(p, q)->value() == 1.0);
  CHECK(o.d0(p, q)->value() == 3.0);
  CHECK(o.d0(q, p)->value() == 3.0);
  CHECK(o.dbar(p, q)->value() == 6.0);  // now finite: curves carry paths
  CHECK(o.dbar(p, p)->value() == 0.0);

  // spine points keep the spider's intrinsic metric, plus routes through p
  PointId axis3 = *x.find_by_meta(3, 2, 1.0);
  CHECK(o.dbar(q, axis3)->value() == doctest::Approx(3.0 - 1.0 / 3));
  CHECK(o.dbar(p, axis3)->value() ==
        doctest::Approx(3.0 + 1.0 / 3));  // 6 - s, s = 3 - 1/3

  // no closed form on curve interiors: the oracle declines rather than guess
  std::vector<PointId> curve = piece_path(x, 1002, "p");
  PointId inner = curve[curve.size() / 2];
  CHECK(!o.dbar(p, inner).has_value());
  CHECK(!o.d0(p, inner).has_value());
  CHECK(o.d(p, inner).has_value());
}
