#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <memory>
#include <random>
#include <stdexcept>
#include <vector>

#include "chainmetric/generators.hpp"
#include "chainmetric/length.hpp"
#include "chainmetric/oracles.hpp"
#include "oracle_utils.hpp"

using namespace chainmetric;

namespace {

SparsePoint pt2(double x, double y) {
  return SparsePoint::make({{1, x}, {2, y}});
}

}  // namespace

TEST_CASE("polyline length sums vertex distances") {
  std::vector<SparsePoint> seg;
  for (int i = 0; i <= 8; ++i)
    seg.push_back(SparsePoint::make({{1, i / 8.0}}));

  CHECK(polyline_length(seg, MetricKind::sup) == ExtReal(1.0));
  CHECK(polyline_length(seg, MetricKind::euclidean) == ExtReal(1.0));

  CHECK(polyline_length({seg[0]}, MetricKind::sup) == ExtReal(0.0));
  CHECK_THROWS_AS(polyline_length(std::vector<SparsePoint>{}, MetricKind::sup),
                  std::invalid_argument);
  CHECK_THROWS_AS(polyline_length(seg, MetricKind::matrix),
                  std::invalid_argument);

  // out-of-order traversal backtracks and lengthens
  std::vector<SparsePoint> zig = {seg[0], seg[4], seg[2], seg[8]};
  CHECK(polyline_length(zig, MetricKind::sup) == ExtReal(1.5));
}

TEST_CASE("polyline length by ids uses the space metric") {
  // two-block matrix space: hops across blocks are infinite
  DistanceMatrix m(4);
  m.set(0, 1, 0.5);
  m.set(2, 3, 0.25);
  auto shared = std::make_shared<const DistanceMatrix>(m);
  FiniteMetricSpace s = FiniteMetricSpace::matrix_space(
      shared, std::vector<SparsePoint>(4), {}, {}, 0.0, "", {});

  CHECK(polyline_length(s, {0, 1}) == ExtReal(0.5));
  CHECK(polyline_length(s, {0, 1, 0, 1}) == ExtReal(1.5));
  CHECK(polyline_length(s, {0, 1, 2}).is_infinite());
  CHECK_THROWS_AS(polyline_length(s, {0, 7}), std::out_of_range);
  CHECK_THROWS_AS(polyline_length(s, std::vector<PointId>{}),
                  std::invalid_argument);
}

TEST_CASE("sampled detour curves have the advertised lengths") {
  FiniteMetricSpace x = generate_x(4, 1.0 / 32);
  PointId p = x.landmark("p"), q = x.landmark("q");

  for (int k = 2; k <= 5; ++k) {
    std::vector<PointId> curve = piece_path(x, 1000 + k, "p");
    auto axis_end = x.find_by_meta(k, 2, 1.0);
    REQUIRE(axis_end.has_value());
    curve.push_back(*axis_end);

    ExtReal len = polyline_length(x, curve);
    REQUIRE(len.is_finite());
    CHECK(len.value() == doctest::Approx(3.0 + 1.0 / k).epsilon(1e-9));
    // never below the straight-line distance between the endpoints
    CHECK(len.value() >= x.distance(p, *axis_end));
  }

  // detour out (3 + 1/k) and spine back (3 - 1/k) concatenate to exactly 6
  std::vector<PointId> route = piece_path(x, 1000 + 2, "p");
  route.push_back(*x.find_by_meta(2, 2, 1.0));
  std::vector<PointId> spine = piece_path(x, 2);  // q first: q sits on piece 2
  REQUIRE(spine.front() == q);
  REQUIRE(spine.back() == route.back());
  for (std::size_t i = spine.size() - 1; i-- > 0;) route.push_back(spine[i]);
  REQUIRE(route.back() == q);
  CHECK(polyline_length(x, route).value() == doctest::Approx(6.0).epsilon(1e-9));
}

TEST_CASE("refinement converges on rectifiable paths") {
  SUBCASE("constant path") {
    RefineResult r = refine_length(
        [](double) { return pt2(0.25, 0.75); }, MetricKind::sup, 1e-9);
    CHECK(r.length == ExtReal(0.0));
    CHECK(r.converged);
  }

  SUBCASE("straight segment is exact at every depth") {
    RefineResult r = refine_length(
        [](double t) { return pt2(t, 2.0 * t); }, MetricKind::sup, 1e-12);
    CHECK(r.length == ExtReal(2.0));
    CHECK(r.converged);
    CHECK(r.depth == 1);
    CHECK(r.segments == 2);
  }

  SUBCASE("unit circle perimeter") {
    auto circle = [](double t) {
      double a = 2.0 * M_PI * t;
      return pt2(std::cos(a), std::sin(a));
    };
    RefineResult r = refine_length(circle, MetricKind::euclidean, 1e-6);
    REQUIRE(r.converged);
    // inscribed polygons approach from below
    CHECK(r.length.value() <= 2.0 * M_PI);
    CHECK(r.length.value() == doctest::Approx(2.0 * M_PI).epsilon(1e-6));
    CHECK(r.segments == (std::size_t{1} << r.depth));
  }

  SUBCASE("parameter validation") {
    auto f = [](double t) { return pt2(t, 0.0); };
    CHECK_THROWS_AS(refine_length(nullptr, MetricKind::sup, 1e-6),
                    std::invalid_argument);
    CHECK_THROWS_AS(refine_length(f, MetricKind::sup, 0.0),
                    std::invalid_argument);
    CHECK_THROWS_AS(refine_length(f, MetricKind::sup, 1e-6, 0),
                    std::invalid_argument);
    CHECK_THROWS_AS(refine_length(f, MetricKind::matrix, 1e-6),
                    std::invalid_argument);
  }
}

TEST_CASE("refinement flags paths of unbounded variation") {
  // y = t sin(1/t) has divergent variation near 0: each halving of the mesh
  // reveals more oscillations, so partition sums keep growing
  auto wild = [](double t) {
    return pt2(t, t > 0.0 ? t * std::sin(1.0 / t) : 0.0);
  };
  RefineResult r = refine_length(wild, MetricKind::euclidean, 1e-3, 12);
  CHECK(!r.converged);
  CHECK(r.depth == 12);
  CHECK(r.segments == (std::size_t{1} << 12));
  CHECK(r.length.value() > 1.0);  // already well above the chord
}

TEST_CASE("partition sums never decrease under refinement") {
  std::mt19937_64 rng(2718);
  std::uniform_int_distribution<int> coord(0, 64);
  std::uniform_int_distribution<int> dim(2, 3);
  for (int trial = 0; trial < 20; ++trial) {
    std::vector<SparsePoint> full;
    for (int i = 0; i < 9; ++i)
      full.push_back(SparsePoint::make(
          {{1, coord(rng) / 32.0}, {dim(rng), coord(rng) / 32.0}}));
    // drop interior vertices: the coarser polyline can only be shorter
    std::vector<SparsePoint> coarse = {full.front()};
    for (std::size_t i = 1; i + 1 < full.size(); ++i)
      if (i % 2 == 0) coarse.push_back(full[i]);
    coarse.push_back(full.back());
    for (MetricKind kind : {MetricKind::sup, MetricKind::euclidean}) {
      CAPTURE(trial);
      CHECK(polyline_length(coarse, kind) <= polyline_length(full, kind));
    }
  }
}

TEST_CASE("constrained chains with a trivial predicate equal free chains") {
  std::mt19937_64 rng(11);
  DistanceMatrix m = testing::random_dyadic_metric(rng, 8);
  auto shared = std::make_shared<const DistanceMatrix>(m);
  FiniteMetricSpace s = FiniteMetricSpace::matrix_space(
      shared, std::vector<SparsePoint>(8), {}, {}, 0.0, "", {});
  double eps = 0.25;

  auto all_true = [](PointId, PointId) { return true; };
  CHECK(entrywise_equal(constrained_chain_all(s, eps, all_true),
                        chain_metric_all(s, eps), 0.0));

  // forbidding an edge can only lengthen chains
  auto not01 = [](PointId a, PointId b) {
    return !((a == 0 && b == 1) || (a == 1 && b == 0));
  };
  DistanceMatrix free = chain_metric_all(s, eps);
  DistanceMatrix fenced = constrained_chain_all(s, eps, not01);
  for (PointId i = 0; i < s.size(); ++i)
    for (PointId j = i + 1; j < s.size(); ++j)
      CHECK(fenced.raw(i, j) >= free.raw(i, j));

  // a predicate in the options and one in the call compose conjunctively
  auto not23 = [](PointId a, PointId b) {
    return !((a == 2 && b == 3) || (a == 3 && b == 2));
  };
  ChainQueryOptions opts;
  opts.admissible = not01;
  auto both = [&](PointId a, PointId b) { return not01(a, b) && not23(a, b); };
  CHECK(entrywise_equal(constrained_chain_all(s, eps, not23, opts),
                        constrained_chain_all(s, eps, both), 0.0));

  // eval/row agree with the matrix view
  std::vector<double> row = constrained_chain_row(s, eps, not01, 0);
  for (PointId j = 0; j < s.size(); ++j) {
    CHECK(row[j] == fenced.raw(0, j));
    ExtReal e = constrained_chain_eval(s, eps, not01, 0, j);
    if (!e.is_infinite()) CHECK(e.value() == row[j]);
  }
}

TEST_CASE("branch-respecting steps estimate the intrinsic spider metric") {
  FiniteMetricSpace y = generate_y(8, 1.0 / 32);
  PointId p = y.landmark("p"), q = y.landmark("q");
  double eps = 1.0 / 8;

  // intrinsic paths live on one spine and pass through the hub; allow only
  // steps that stay on a piece or touch the hub
  auto same_branch = [&](PointId a, PointId b) {
    return y.meta(a).piece == y.meta(b).piece || a == q || b == q;
  };

  AnalyticOracle oracle = analytic_oracle_y(y);
  std::vector<double> row = constrained_chain_row(y, eps, same_branch, q);
  std::vector<double> free_row = chain_metric_row(y, eps, q);

  std::size_t checked = 0;
  for (PointId id = 0; id < y.size(); id += 7) {
    auto want = oracle.dbar(q, id);
    REQUIRE(want.has_value());
    if (want->is_infinite()) {
      CHECK(row[id] == std::numeric_limits<double>::infinity());
    } else {
      CHECK(std::fabs(row[id] - want->value()) <= 4.0 * eps);
    }
    CHECK(row[id] >= free_row[id]);  // constraining never shortens
    ++checked;
  }
  CHECK(checked > 100);

  // the isolated point has no admissible step at this hop bound
  CHECK(row[p] == std::numeric_limits<double>::infinity());
}
