#include "chainmetric/chains.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <memory>
#include <queue>
#include <stdexcept>
#include <string>

#include "chainmetric/util.hpp"

namespace chainmetric {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr PointId kNoParent = static_cast<PointId>(-1);

struct DijkstraResult {
  std::vector<double> dist;
  std::vector<PointId> parent;  // filled only when witnesses are requested
};

// Forward path source -> x recovered from the parent links.
std::vector<PointId> unwind(const std::vector<PointId>& parent, PointId x) {
  std::vector<PointId> out;
  for (PointId cur = x; cur != kNoParent; cur = parent[cur])
    out.push_back(cur);
  std::reverse(out.begin(), out.end());
  return out;
}

// Settled-order Dijkstra over the implicit eps-graph. Weights are exact
// distances (positive off the diagonal), so every equally-near predecessor
// of a node pops before the node itself: tie-breaking by full-path
// comparison at relaxation time is complete by the time a node settles,
// which makes witness chains independent of neighbor enumeration order.
DijkstraResult shortest_chains(const FiniteMetricSpace& space,
                               const NeighborIndex& index, double eps,
                               PointId source, const EdgeFilter& admissible,
                               std::optional<PointId> target,
                               bool track_parents) {
  std::size_t n = space.size();
  if (source >= n) throw std::out_of_range("chain query: bad source id");
  if (target && *target >= n)
    throw std::out_of_range("chain query: bad target id");
  DijkstraResult r;
  r.dist.assign(n, kInf);
  if (track_parents) r.parent.assign(n, kNoParent);
  std::vector<char> settled(n, 0);
  using Item = std::pair<double, PointId>;
  std::priority_queue<Item, std::vector<Item>, std::greater<>> heap;
  r.dist[source] = 0.0;
  heap.push({0.0, source});
  while (!heap.empty()) {
    auto [du, u] = heap.top();
    heap.pop();
    if (settled[u]) continue;
    settled[u] = 1;
    if (target && u == *target) break;
    index.for_neighbors(u, eps, [&](PointId v, double w) {
      if (settled[v]) return;
      if (admissible && !admissible(u, v)) return;
      double cand = du + w;
      if (cand < r.dist[v]) {
        r.dist[v] = cand;
        if (track_parents) r.parent[v] = u;
        heap.push({cand, v});
      } else if (track_parents && cand == r.dist[v] && r.parent[v] != u) {
        std::vector<PointId> via_u = unwind(r.parent, u);
        via_u.push_back(v);
        std::vector<PointId> cur = unwind(r.parent, r.parent[v]);
        cur.push_back(v);
        if (std::lexicographical_compare(via_u.begin(), via_u.end(),
                                         cur.begin(), cur.end()))
          r.parent[v] = u;
      }
    });
  }
  return r;
}

// The sandwich d <= d_eps holds in exact arithmetic for every pair, but a
// float sum along a many-hop chain can land an ulp below the direct
// distance. Clamping restores the guarantee (and with it the exactness of
// small-distance agreement: one admissible hop evaluates to exactly d).
double clamp_to_direct(const FiniteMetricSpace& space, PointId s, PointId t,
                       double chained) {
  if (chained == kInf) return chained;
  return std::max(chained, space.distance(s, t));
}

// Borrow the caller's index or build one for the call.
struct IndexLease {
  std::unique_ptr<NeighborIndex> owned;
  const NeighborIndex* ptr = nullptr;

  IndexLease(const FiniteMetricSpace& space, const ChainQueryOptions& opts) {
    if (opts.index) {
      ptr = opts.index;
    } else {
      owned = build_neighbor_index(space);
      ptr = owned.get();
    }
  }
};

}  // namespace

std::vector<std::pair<PointId, double>> epsilon_neighbors(
    const FiniteMetricSpace& space, PointId x, double eps,
    const ChainQueryOptions& opts) {
  if (x >= space.size()) throw std::out_of_range("epsilon_neighbors: bad id");
  if (!(eps > 0.0)) throw std::invalid_argument("epsilon_neighbors: eps > 0");
  IndexLease lease(space, opts);
  std::vector<std::pair<PointId, double>> out;
  lease.ptr->for_neighbors(x, eps, [&](PointId y, double d) {
    if (opts.admissible && !opts.admissible(x, y)) return;
    out.push_back({y, d});
  });
  std::sort(out.begin(), out.end(),
            [](const auto& a, const auto& b) { return a.first < b.first; });
  return out;
}

std::vector<double> chain_metric_row(const FiniteMetricSpace& space,
                                     double eps, PointId source,
                                     const ChainQueryOptions& opts) {
  if (!(eps > 0.0)) throw std::invalid_argument("chain_metric_row: eps > 0");
  IndexLease lease(space, opts);
  std::vector<double> dist =
      shortest_chains(space, *lease.ptr, eps, source, opts.admissible,
                      std::nullopt, false)
          .dist;
  for (std::size_t j = 0; j < dist.size(); ++j)
    dist[j] = clamp_to_direct(space, source, static_cast<PointId>(j), dist[j]);
  return dist;
}

DistanceMatrix chain_metric_all(const FiniteMetricSpace& space, double eps,
                                const ChainQueryOptions& opts) {
  if (!(eps > 0.0)) throw std::invalid_argument("chain_metric_all: eps > 0");
  DistanceMatrix m(space.size());  // enforces the explicit-matrix cap
  IndexLease lease(space, opts);
  std::size_t n = space.size();
  parallel_for(
      n,
      [&](std::size_t i) {
        auto row = shortest_chains(space, *lease.ptr, eps,
                                   static_cast<PointId>(i), opts.admissible,
                                   std::nullopt, false)
                       .dist;
        for (std::size_t j = i + 1; j < n; ++j)
          if (row[j] != kInf)
            m.set(static_cast<PointId>(i), static_cast<PointId>(j),
                  clamp_to_direct(space, static_cast<PointId>(i),
                                  static_cast<PointId>(j), row[j]));
      },
      opts.threads);
  return m;
}

ExtReal chain_eval(const FiniteMetricSpace& space, double eps, PointId s,
                   PointId t, const ChainQueryOptions& opts) {
  if (!(eps > 0.0)) throw std::invalid_argument("chain_eval: eps > 0");
  if (s == t) {
    if (s >= space.size()) throw std::out_of_range("chain_eval: bad id");
    return ExtReal(0.0);
  }
  IndexLease lease(space, opts);
  double d = clamp_to_direct(
      space, s, t,
      shortest_chains(space, *lease.ptr, eps, s, opts.admissible, t, false)
          .dist[t]);
  return d == kInf ? ExtReal::infinity() : ExtReal(d);
}

Chain minimizing_chain(const FiniteMetricSpace& space, double eps, PointId s,
                       PointId t, const ChainQueryOptions& opts) {
  if (!(eps > 0.0)) throw std::invalid_argument("minimizing_chain: eps > 0");
  Chain c;
  c.eps = eps;
  if (s == t) {
    if (s >= space.size()) throw std::out_of_range("minimizing_chain: bad id");
    c.points = {s};
    c.length = 0.0;
    return c;
  }
  IndexLease lease(space, opts);
  DijkstraResult r = shortest_chains(space, *lease.ptr, eps, s,
                                     opts.admissible, t, true);
  if (r.dist[t] == kInf)
    throw std::runtime_error("minimizing_chain: unreachable at eps " +
                             std::to_string(eps));
  c.points = unwind(r.parent, t);
  c.length = r.dist[t];
  return c;
}

DistanceMatrix chain_operator(const DistanceMatrix& m, double eps) {
  if (!(eps > 0.0)) throw std::invalid_argument("chain_operator: eps > 0");
  ValidationReport v = validate_metric(m);
  if (!v.valid())
    throw std::invalid_argument("chain_operator: input fails " +
                                v.describe_first_failure());
  auto shared = std::make_shared<DistanceMatrix>(m);
  FiniteMetricSpace space = FiniteMetricSpace::matrix_space(
      std::move(shared), std::vector<SparsePoint>(m.size()), {}, {}, 0.0, "",
      {});
  return chain_metric_all(space, eps);
}

IterateResult iterate_chain(const DistanceMatrix& m,
                            const std::vector<double>& eps_levels) {
  IterateResult r;
  r.levels.push_back(m);
  for (double eps : eps_levels)
    r.levels.push_back(chain_operator(r.levels.back(), eps));
  // Stabilized means constant from some level to the end. With a varying
  // schedule an early plateau can still break later (a smaller eps may
  // disconnect pairs), so scan the constant suffix rather than the first
  // equal pair.
  std::size_t i = r.levels.size() - 1;
  while (i > 0 && r.levels[i - 1] == r.levels[i]) --i;
  if (i + 1 < r.levels.size()) r.stabilized_at = static_cast<int>(i);
  return r;
}

EpsSchedule EpsSchedule::geometric(double first, double ratio, int count,
                                   double floor) {
  EpsSchedule s;
  s.floor = floor;
  double v = first;
  for (int i = 0; i < count; ++i, v *= ratio) s.values.push_back(v);
  return s;
}

void EpsSchedule::validate() const {
  if (values.empty())
    throw std::invalid_argument("eps schedule: no values");
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (!(values[i] > 0.0))
      throw std::invalid_argument("eps schedule: values must be positive");
    if (i && !(values[i] < values[i - 1]))
      throw std::invalid_argument("eps schedule: values must be strictly "
                                  "decreasing");
    if (values[i] < floor - kTol)
      throw std::invalid_argument("eps schedule: value below floor");
  }
}

ConvergenceReport estimate_d0(const FiniteMetricSpace& space, PointId s,
                              PointId t, const EpsSchedule& schedule,
                              double rtol, const ChainQueryOptions& opts) {
  schedule.validate();
  if (!(rtol > 0.0)) throw std::invalid_argument("estimate_d0: rtol > 0");
  if (double h = space.resolution(); h > 0.0) {
    double need = 3.0 * h - kTol;
    if (schedule.values.back() < need)
      throw std::invalid_argument(
          "estimate_d0: schedule goes below 3x the sample resolution");
  }
  IndexLease lease(space, opts);
  ChainQueryOptions shared = opts;
  shared.index = lease.ptr;

  ConvergenceReport rep;
  rep.schedule = schedule;
  for (double eps : schedule.values) {
    ExtReal v = chain_eval(space, eps, s, t, shared);
    if (v.is_infinite() && !rep.disconnected_at) rep.disconnected_at = eps;
    rep.estimates.push_back(v);
  }
  rep.monotone = true;
  for (std::size_t i = 1; i < rep.estimates.size(); ++i) {
    const ExtReal& prev = rep.estimates[i - 1];
    const ExtReal& next = rep.estimates[i];
    if (next.is_infinite()) continue;
    if (prev.is_infinite() || next.value() < prev.value() - kTol) {
      rep.monotone = false;
      break;
    }
  }
  rep.final_estimate = rep.estimates.back();
  if (rep.estimates.size() >= 2) {
    const ExtReal& a = rep.estimates[rep.estimates.size() - 2];
    const ExtReal& b = rep.estimates.back();
    if (a.is_infinite() && b.is_infinite())
      rep.converged = true;
    else if (a.is_finite() && b.is_finite())
      rep.converged =
          std::fabs(b.value() - a.value()) <= rtol * std::max(1.0, b.value());
  }
  return rep;
}

WaypointResult extract_waypoints(const FiniteMetricSpace& space, double eps,
                                 PointId s, PointId t, double delta,
                                 const ChainQueryOptions& opts) {
  IndexLease lease(space, opts);
  ChainQueryOptions shared = opts;
  shared.index = lease.ptr;

  Chain c = minimizing_chain(space, eps, s, t, shared);
  WaypointResult w;
  w.total = c.length;
  if (!(delta > 0.0) || delta >= c.length)
    throw std::invalid_argument("extract_waypoints: need 0 < delta < chain "
                                "distance");
  if (eps > delta / 4.0 + kTol)
    throw std::invalid_argument("extract_waypoints: eps must be <= delta/4");

  int n_stops = static_cast<int>(std::floor(c.length / delta));
  double cum = 0.0;
  std::size_t pos = 0;
  for (int stop = 1; stop <= n_stops; ++stop) {
    double want = stop * delta - kTol;
    while (cum < want && pos + 1 < c.points.size()) {
      cum += space.distance(c.points[pos], c.points[pos + 1]);
      ++pos;
    }
    w.waypoints.push_back(c.points[pos]);
  }

  PointId prev = s;
  double acc = 0.0;
  for (PointId stop : w.waypoints) {
    double leg = chain_eval(space, eps, prev, stop, shared).value();
    w.legs.push_back(leg);
    acc += leg;
    prev = stop;
  }
  w.last_leg =
      prev == t ? 0.0 : chain_eval(space, eps, prev, t, shared).value();
  w.residual = std::fabs(acc + w.last_leg - w.total);
  return w;
}

}  // namespace chainmetric
