#pragma once

#include <functional>
#include <optional>
#include <utility>
#include <vector>

#include "chainmetric/distance_matrix.hpp"
#include "chainmetric/ext_real.hpp"
#include "chainmetric/space.hpp"

namespace chainmetric {

// A hop-bounded chain: consecutive points at distance <= eps, length equal
// to the sum of consecutive distances.
struct Chain {
  std::vector<PointId> points;  // never empty; single point when s == t
  double eps = 0.0;
  double length = 0.0;
};

// Extra veto over candidate hops, applied on top of the eps bound (e.g. the
// cut-respecting runs on the slit plane). Must be symmetric in (a, b).
using EdgeFilter = std::function<bool(PointId, PointId)>;

struct ChainQueryOptions {
  // Reuse a prebuilt index across queries on the same space; nullptr means
  // build a throwaway one per call.
  const NeighborIndex* index = nullptr;
  EdgeFilter admissible;  // empty: every hop within eps is admissible
  int threads = 0;        // for the all-pairs fan-out; 0 = library default
};

// Exactly the points y != x with d(x, y) <= eps, ascending id.
std::vector<std::pair<PointId, double>> epsilon_neighbors(
    const FiniteMetricSpace& space, PointId x, double eps,
    const ChainQueryOptions& opts = {});

// Shortest-chain distances from one source over the implicit eps-graph
// (Dijkstra with on-demand neighbor enumeration); +inf where unreachable.
std::vector<double> chain_metric_row(const FiniteMetricSpace& space,
                                     double eps, PointId source,
                                     const ChainQueryOptions& opts = {});

// All-pairs chain distances, parallel over sources. Memory guard: refuses
// spaces beyond the explicit-matrix cap.
DistanceMatrix chain_metric_all(const FiniteMetricSpace& space, double eps,
                                const ChainQueryOptions& opts = {});

// Single-pair evaluation; stops as soon as the target settles.
ExtReal chain_eval(const FiniteMetricSpace& space, double eps, PointId s,
                   PointId t, const ChainQueryOptions& opts = {});

// A chain achieving chain_eval(space, eps, s, t), ties broken toward the
// lexicographically smallest id sequence (deterministic witnesses). Throws
// std::runtime_error when s and t are not chain-connected at this eps.
Chain minimizing_chain(const FiniteMetricSpace& space, double eps, PointId s,
                       PointId t, const ChainQueryOptions& opts = {});

// One chain-operator application to an explicit metric: all-pairs shortest
// paths over the graph keeping exactly the entries <= eps (+ shared slack).
// The input must pass validate_metric; the output does again.
DistanceMatrix chain_operator(const DistanceMatrix& m, double eps);

// Repeated application with a per-level hop bound. levels[0] is the input;
// levels[i] = chain_operator(levels[i-1], eps_levels[i-1]).
struct IterateResult {
  std::vector<DistanceMatrix> levels;
  // smallest i from which the sequence is constant to the end
  // (levels[i] == levels[i+1] == ... == levels.back()), if any; a varying
  // schedule can plateau early and still break later, so equality must
  // hold through the final level
  std::optional<int> stabilized_at;
};
IterateResult iterate_chain(const DistanceMatrix& m,
                            const std::vector<double>& eps_levels);

// Decreasing hop bounds for d0 estimation. `floor` documents the smallest
// hop scale the sample supports; values must stay above it.
struct EpsSchedule {
  std::vector<double> values;
  double floor = 0.0;

  static EpsSchedule geometric(double first, double ratio, int count,
                               double floor = 0.0);
  void validate() const;  // throws std::invalid_argument on bad shape
};

struct ConvergenceReport {
  EpsSchedule schedule;
  std::vector<ExtReal> estimates;  // one per schedule value
  bool monotone = false;   // nondecreasing as eps shrinks (tolerance 1e-12)
  bool converged = false;  // last two within rtol * max(1, last)
  ExtReal final_estimate = ExtReal(0.0);
  // largest scheduled eps whose chain distance is infinite, if any
  std::optional<double> disconnected_at;
};

// Evaluates the chain distance along the schedule. Requires every hop bound
// to clear 3x the sample resolution (when the space declares one): below
// that the sample can no longer shadow continuum chains.
ConvergenceReport estimate_d0(const FiniteMetricSpace& space, PointId s,
                              PointId t, const EpsSchedule& schedule,
                              double rtol = 1e-2,
                              const ChainQueryOptions& opts = {});

// Near-equispaced stops along the minimizing chain: the first chain point
// at or past each multiple of delta. legs[i] re-evaluates the chain metric
// between consecutive stops; the final partial leg is reported separately.
struct WaypointResult {
  std::vector<PointId> waypoints;  // N = floor(total / delta) stops
  std::vector<double> legs;        // s->w_1, then w_i -> w_{i+1}
  double last_leg = 0.0;           // w_N -> t (0 when w_N == t)
  double total = 0.0;              // chain distance s -> t
  double residual = 0.0;           // |sum(legs) + last_leg - total|
};
WaypointResult extract_waypoints(const FiniteMetricSpace& space, double eps,
                                 PointId s, PointId t, double delta,
                                 const ChainQueryOptions& opts = {});

}  // namespace chainmetric
