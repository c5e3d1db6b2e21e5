#include "chainmetric/space.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "chainmetric/util.hpp"

namespace chainmetric {

const char* to_string(MetricKind k) {
  switch (k) {
    case MetricKind::sup: return "sup";
    case MetricKind::euclidean: return "euclidean";
    case MetricKind::matrix: return "matrix";
  }
  return "?";
}

MetricKind metric_kind_from_string(const std::string& s) {
  if (s == "sup") return MetricKind::sup;
  if (s == "euclidean") return MetricKind::euclidean;
  if (s == "matrix") return MetricKind::matrix;
  throw std::invalid_argument("unknown metric kind: " + s);
}

namespace {

void check_common(std::size_t n, const std::map<std::string, PointId>& lms,
                  const std::vector<PointMeta>& meta) {
  if (n == 0) throw std::invalid_argument("space: no points");
  for (const auto& [name, id] : lms)
    if (id >= n)
      throw std::invalid_argument("space: landmark '" + name +
                                  "' out of range");
  if (!meta.empty() && meta.size() != n)
    throw std::invalid_argument("space: meta size mismatch");
}

}  // namespace

FiniteMetricSpace FiniteMetricSpace::coordinate_space(
    MetricKind kind, std::vector<SparsePoint> points,
    std::map<std::string, PointId> landmarks, std::vector<PointMeta> meta,
    double resolution, std::string generator, nlohmann::json params) {
  if (kind == MetricKind::matrix)
    throw std::invalid_argument("coordinate_space: needs sup or euclidean");
  check_common(points.size(), landmarks, meta);
  FiniteMetricSpace s;
  s.n_ = points.size();
  s.kind_ = kind;
  s.points_ = std::move(points);
  s.meta_ = std::move(meta);
  s.landmarks_ = std::move(landmarks);
  s.resolution_ = resolution;
  s.generator_ = std::move(generator);
  s.params_ = std::move(params);
  return s;
}

FiniteMetricSpace FiniteMetricSpace::matrix_space(
    std::shared_ptr<const DistanceMatrix> m, std::vector<SparsePoint> points,
    std::map<std::string, PointId> landmarks, std::vector<PointMeta> meta,
    double resolution, std::string generator, nlohmann::json params) {
  if (!m) throw std::invalid_argument("matrix_space: null matrix");
  if (!points.empty() && points.size() != m->size())
    throw std::invalid_argument("matrix_space: point/matrix size mismatch");
  check_common(m->size(), landmarks, meta);
  FiniteMetricSpace s;
  s.n_ = m->size();
  s.kind_ = MetricKind::matrix;
  s.matrix_ = std::move(m);
  s.points_ = std::move(points);
  s.meta_ = std::move(meta);
  s.landmarks_ = std::move(landmarks);
  s.resolution_ = resolution;
  s.generator_ = std::move(generator);
  s.params_ = std::move(params);
  return s;
}

FiniteMetricSpace FiniteMetricSpace::oracle_space(
    std::size_t n, std::shared_ptr<const DistanceOracle> o,
    std::vector<SparsePoint> points, std::map<std::string, PointId> landmarks,
    std::vector<PointMeta> meta, double resolution, std::string generator,
    nlohmann::json params) {
  if (!o) throw std::invalid_argument("oracle_space: null oracle");
  if (!points.empty() && points.size() != n)
    throw std::invalid_argument("oracle_space: point count mismatch");
  check_common(n, landmarks, meta);
  FiniteMetricSpace s;
  s.n_ = n;
  s.kind_ = MetricKind::matrix;
  s.oracle_ = std::move(o);
  s.points_ = std::move(points);
  s.meta_ = std::move(meta);
  s.landmarks_ = std::move(landmarks);
  s.resolution_ = resolution;
  s.generator_ = std::move(generator);
  s.params_ = std::move(params);
  return s;
}

double FiniteMetricSpace::distance(PointId a, PointId b) const {
  if (a >= n_ || b >= n_) throw std::out_of_range("distance: bad id");
  if (a == b) return 0.0;
  switch (kind_) {
    case MetricKind::sup:
      return sup_distance(points_[a], points_[b]).value();
    case MetricKind::euclidean:
      return euclidean_distance(points_[a], points_[b]).value();
    case MetricKind::matrix:
      return matrix_ ? matrix_->raw(a, b) : oracle_->distance(a, b);
  }
  return std::numeric_limits<double>::infinity();
}

PointId FiniteMetricSpace::landmark(const std::string& name) const {
  auto it = landmarks_.find(name);
  if (it == landmarks_.end())
    throw std::invalid_argument("unknown landmark: " + name);
  return it->second;
}

std::optional<PointId> FiniteMetricSpace::find_landmark(
    const std::string& name) const {
  auto it = landmarks_.find(name);
  if (it == landmarks_.end()) return std::nullopt;
  return it->second;
}

std::optional<PointId> FiniteMetricSpace::find_by_meta(std::int32_t piece,
                                                       std::int32_t segment,
                                                       double t,
                                                       double tol) const {
  for (PointId id = 0; id < meta_.size(); ++id) {
    const PointMeta& m = meta_[id];
    if (m.piece == piece && m.segment == segment && std::fabs(m.t - t) <= tol)
      return id;
  }
  return std::nullopt;
}

}  // namespace chainmetric
