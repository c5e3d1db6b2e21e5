#include "chainmetric/length.hpp"

#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <utility>

namespace chainmetric {

namespace {

ExtReal coord_distance(const SparsePoint& a, const SparsePoint& b,
                       MetricKind kind) {
  if (kind == MetricKind::sup) return sup_distance(a, b);
  if (kind == MetricKind::euclidean) return euclidean_distance(a, b);
  throw std::invalid_argument("polyline length: need a coordinate metric");
}

ChainQueryOptions with_predicate(const ChainQueryOptions& opts,
                                 const AdmissibilityPredicate& pred) {
  ChainQueryOptions out = opts;
  if (!pred) return out;
  if (out.admissible) {
    EdgeFilter prev = std::move(out.admissible);
    out.admissible = [prev, pred](PointId a, PointId b) {
      return prev(a, b) && pred(a, b);
    };
  } else {
    out.admissible = pred;
  }
  return out;
}

}  // namespace

ExtReal polyline_length(const std::vector<SparsePoint>& vertices,
                        MetricKind kind) {
  if (vertices.empty())
    throw std::invalid_argument("polyline_length: need at least one vertex");
  ExtReal total(0.0);
  for (std::size_t i = 0; i + 1 < vertices.size(); ++i)
    total += coord_distance(vertices[i], vertices[i + 1], kind);
  return total;
}

ExtReal polyline_length(const FiniteMetricSpace& space,
                        const std::vector<PointId>& vertices) {
  if (vertices.empty())
    throw std::invalid_argument("polyline_length: need at least one vertex");
  for (PointId id : vertices)
    if (id >= space.size())
      throw std::out_of_range("polyline_length: vertex id " +
                              std::to_string(id));
  double total = 0.0;
  for (std::size_t i = 0; i + 1 < vertices.size(); ++i)
    total += space.distance(vertices[i], vertices[i + 1]);
  return std::isinf(total) ? ExtReal::infinity() : ExtReal(total);
}

RefineResult refine_length(const std::function<SparsePoint(double)>& sampler,
                           MetricKind kind, double tol, int max_depth) {
  if (!sampler) throw std::invalid_argument("refine_length: no sampler");
  if (!(tol > 0.0)) throw std::invalid_argument("refine_length: tol > 0");
  if (max_depth < 1) throw std::invalid_argument("refine_length: max_depth >= 1");

  auto partition_sum = [&](int depth) {
    std::size_t n = std::size_t{1} << depth;
    double sum = 0.0;
    SparsePoint prev = sampler(0.0);
    for (std::size_t i = 1; i <= n; ++i) {
      SparsePoint cur = sampler(static_cast<double>(i) / static_cast<double>(n));
      sum += coord_distance(prev, cur, kind).value();
      prev = std::move(cur);
    }
    return sum;
  };

  RefineResult r;
  double prev = partition_sum(0);
  for (int depth = 1; depth <= max_depth; ++depth) {
    double cur = partition_sum(depth);
    r.length = ExtReal(cur);
    r.depth = depth;
    r.segments = std::size_t{1} << depth;
    if (cur - prev <= tol) {
      r.converged = true;
      return r;
    }
    prev = cur;
  }
  return r;  // hit max_depth: lower bound, not converged
}

ExtReal constrained_chain_eval(const FiniteMetricSpace& space, double eps,
                               const AdmissibilityPredicate& admissible,
                               PointId s, PointId t,
                               const ChainQueryOptions& opts) {
  return chain_eval(space, eps, s, t, with_predicate(opts, admissible));
}

std::vector<double> constrained_chain_row(
    const FiniteMetricSpace& space, double eps,
    const AdmissibilityPredicate& admissible, PointId source,
    const ChainQueryOptions& opts) {
  return chain_metric_row(space, eps, source, with_predicate(opts, admissible));
}

DistanceMatrix constrained_chain_all(const FiniteMetricSpace& space,
                                     double eps,
                                     const AdmissibilityPredicate& admissible,
                                     const ChainQueryOptions& opts) {
  return chain_metric_all(space, eps, with_predicate(opts, admissible));
}

}  // namespace chainmetric
