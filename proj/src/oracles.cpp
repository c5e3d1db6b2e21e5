#include "chainmetric/oracles.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

#include "chainmetric/generators.hpp"
#include "chainmetric/sparse_point.hpp"
#include "chainmetric/util.hpp"

namespace chainmetric {

namespace {

ExtReal inf() { return ExtReal::infinity(); }

AnalyticOracle::Eval sampled(const FiniteMetricSpace& s) {
  return [&s](PointId a, PointId b) -> std::optional<ExtReal> {
    return ExtReal(s.distance(a, b));
  };
}

// Position of a point of the spider along its spine, measured from q.
// Spine k has total arc length 3 - 1/k; the point (1/k, 0, ...) sits at
// the far end. The isolated landmark p is flagged instead.
struct ArcPos {
  bool is_p = false;
  std::int32_t spine = 0;
  double s = 0.0;
};

ArcPos spider_arc(const FiniteMetricSpace& sp, PointId id) {
  const PointMeta& m = sp.meta(id);
  ArcPos a;
  if (m.piece < 0) {
    a.is_p = true;
    return a;
  }
  a.spine = m.piece;
  double inner = 1.0 / m.piece;
  switch (m.segment) {
    case 0:
      a.s = m.t;
      break;
    case 1:
      a.s = 1.0 + m.t * (1.0 - inner);
      break;
    default:
      a.s = 2.0 - inner + m.t;
      break;
  }
  return a;
}

// Intrinsic path length between two spine points: spines meet only at q.
double spider_path(const ArcPos& a, const ArcPos& b) {
  if (a.spine == b.spine) return std::fabs(a.s - b.s);
  return a.s + b.s;
}

}  // namespace

AnalyticOracle analytic_oracle_y(const FiniteMetricSpace& y) {
  AnalyticOracle o;
  o.d = sampled(y);
  o.dbar = [&y](PointId a, PointId b) -> std::optional<ExtReal> {
    if (a == b) return ExtReal(0.0);
    ArcPos pa = spider_arc(y, a), pb = spider_arc(y, b);
    if (pa.is_p || pb.is_p) return inf();  // p carries no rectifiable path
    return ExtReal(spider_path(pa, pb));
  };
  // Chain limit: p connects through ever-deeper spine ends, each detour
  // entering through q at cost 3 + s; everything else follows the paths.
  o.d0 = [&y](PointId a, PointId b) -> std::optional<ExtReal> {
    if (a == b) return ExtReal(0.0);
    ArcPos pa = spider_arc(y, a), pb = spider_arc(y, b);
    if (pa.is_p) return ExtReal(3.0 + pb.s);
    if (pb.is_p) return ExtReal(3.0 + pa.s);
    return ExtReal(spider_path(pa, pb));
  };
  return o;
}

AnalyticOracle analytic_oracle_x(const FiniteMetricSpace& x) {
  AnalyticOracle o;
  o.d = sampled(x);
  // The added curves (pieces >= 1000) make p reachable: curve k plus the
  // walk back to q costs (3 + 1/k) + (3 - 1/k) = 6 whatever k, and a spine
  // point at arc position s keeps the last leg of length s off the bill.
  // No closed form is published for curve-interior points.
  o.dbar = [&x](PointId a, PointId b) -> std::optional<ExtReal> {
    if (a == b) return ExtReal(0.0);
    const PointMeta& ma = x.meta(a);
    const PointMeta& mb = x.meta(b);
    if (ma.piece >= 1000 || mb.piece >= 1000) return std::nullopt;
    ArcPos pa = spider_arc(x, a), pb = spider_arc(x, b);
    if (pa.is_p && pb.is_p) return ExtReal(0.0);
    if (pa.is_p) return ExtReal(6.0 - pb.s);
    if (pb.is_p) return ExtReal(6.0 - pa.s);
    return ExtReal(spider_path(pa, pb));
  };
  // The curves never help the chain limit: once the hop scale drops below
  // a curve's oscillation width, traversing it costs its full length,
  // which exceeds the spine route. Only the landmark pair is published.
  o.d0 = [&x](PointId a, PointId b) -> std::optional<ExtReal> {
    if (a == b) return ExtReal(0.0);
    PointId p = x.landmark("p"), q = x.landmark("q");
    if ((a == p && b == q) || (a == q && b == p)) return ExtReal(3.0);
    return std::nullopt;
  };
  return o;
}

AnalyticOracle analytic_oracle_comb(const FiniteMetricSpace& comb) {
  AnalyticOracle o;
  o.d = sampled(comb);
  // Teeth communicate only through the base; two points on one tooth (or
  // both on the base with equal x, i.e. the same point) differ by height.
  auto path = [&comb](PointId a, PointId b) -> std::optional<ExtReal> {
    if (a == b) return ExtReal(0.0);
    const SparsePoint& pa = comb.point(a);
    const SparsePoint& pb = comb.point(b);
    double xa = pa.coord(1), ya = pa.coord(2);
    double xb = pb.coord(1), yb = pb.coord(2);
    if (xa == xb) return ExtReal(std::fabs(ya - yb));
    return ExtReal(ya + yb + std::fabs(xa - xb));
  };
  o.dbar = path;
  // Below hop scale 1/(k(k+1)) tooth k is isolated from its neighbours, so
  // chains eventually pay the same descend-and-walk route as paths do.
  o.d0 = path;
  return o;
}

AnalyticOracle analytic_oracle_slit(const FiniteMetricSpace& slit) {
  AnalyticOracle o;
  o.d = sampled(slit);
  // Points straddling the slit at distance eps exist for every eps, so
  // chains tunnel through and the chain limit collapses to the ambient
  // metric.
  o.d0 = sampled(slit);
  // Paths must round one of the slit ends (0, +-1); legs from any point
  // to an end touch the cut line only at that end, so the detour length
  // is exact (for aligned pairs the two candidates tie by collinearity).
  o.dbar = [&slit](PointId a, PointId b) -> std::optional<ExtReal> {
    const SparsePoint& pa = slit.point(a);
    const SparsePoint& pb = slit.point(b);
    if (!slit_crossing(pa, pb)) return euclidean_distance(pa, pb);
    double best = std::numeric_limits<double>::infinity();
    for (double tip_y : {1.0, -1.0}) {
      SparsePoint tip = planar_point(0.0, tip_y);
      best = std::min(best, euclidean_distance(pa, tip).value() +
                                euclidean_distance(tip, pb).value());
    }
    return ExtReal(best);
  };
  return o;
}

AnalyticOracle analytic_oracle_rational(const FiniteMetricSpace& grid) {
  AnalyticOracle o;
  o.d = sampled(grid);
  o.d0 = sampled(grid);  // the sample is order-dense at every hop scale
  o.dbar = [](PointId a, PointId b) -> std::optional<ExtReal> {
    // Rational points carry no nonconstant paths: distinct points are
    // infinitely far in the intrinsic metric.
    return a == b ? ExtReal(0.0) : ExtReal::infinity();
  };
  return o;
}

AnalyticOracle analytic_oracle_multi_edge(const FiniteMetricSpace& edges) {
  AnalyticOracle o;
  // A geodesic graph metric: chains follow arcs at every scale and every
  // arc is rectifiable, so all three metrics coincide with the sample.
  o.d = sampled(edges);
  o.d0 = sampled(edges);
  o.dbar = sampled(edges);
  return o;
}

}  // namespace chainmetric
