#pragma once

#include <cstddef>
#include <functional>
#include <vector>

#include "chainmetric/chains.hpp"
#include "chainmetric/distance_matrix.hpp"
#include "chainmetric/ext_real.hpp"
#include "chainmetric/space.hpp"
#include "chainmetric/sparse_point.hpp"

namespace chainmetric {

// Length of a polyline as the sum of consecutive vertex distances. For a
// polyline the partition supremum defining path length is attained at the
// vertex partition, so no refinement is involved. The id overload uses the
// space's own metric and so also works on matrix- and oracle-backed spaces
// (an infinite hop makes the whole length infinite).
ExtReal polyline_length(const std::vector<SparsePoint>& vertices,
                        MetricKind kind);
ExtReal polyline_length(const FiniteMetricSpace& space,
                        const std::vector<PointId>& vertices);

// Partition-sum length of a parameterized path gamma: [0,1] -> points,
// evaluated on dyadic partitions that double until one doubling adds at
// most tol. Partition sums only grow under refinement, so the reported
// value is always a lower bound on the true length; `converged` records
// whether the loop stopped by tolerance or ran into max_depth (a path of
// unbounded variation never settles).
struct RefineResult {
  ExtReal length{0.0};
  int depth = 0;             // last depth evaluated (2^depth segments)
  std::size_t segments = 1;  // partition size of the reported sum
  bool converged = false;
};
RefineResult refine_length(const std::function<SparsePoint(double)>& sampler,
                           MetricKind kind, double tol, int max_depth = 24);

// Pairwise predicate restricting which chain steps count as path-like.
// Free chain steps may tunnel through the ambient metric where the
// underlying space has no short path (slits, disjoint branches); a
// generator-supplied predicate removes exactly those steps, which turns the
// chain metric into an estimator of the intrinsic path-length metric.
using AdmissibilityPredicate = EdgeFilter;

// Chain metric restricted to admissible steps. Entrywise >= the
// unconstrained values for every predicate (fewer edges, longer chains).
// A predicate already present in opts is kept: steps must pass both.
ExtReal constrained_chain_eval(const FiniteMetricSpace& space, double eps,
                               const AdmissibilityPredicate& admissible,
                               PointId s, PointId t,
                               const ChainQueryOptions& opts = {});
std::vector<double> constrained_chain_row(
    const FiniteMetricSpace& space, double eps,
    const AdmissibilityPredicate& admissible, PointId source,
    const ChainQueryOptions& opts = {});
DistanceMatrix constrained_chain_all(const FiniteMetricSpace& space,
                                     double eps,
                                     const AdmissibilityPredicate& admissible,
                                     const ChainQueryOptions& opts = {});

}  // namespace chainmetric
