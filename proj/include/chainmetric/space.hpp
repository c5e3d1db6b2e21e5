#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "chainmetric/distance_matrix.hpp"
#include "chainmetric/sparse_point.hpp"

#include <json.hpp>

namespace chainmetric {

enum class MetricKind { sup, euclidean, matrix };

const char* to_string(MetricKind k);
MetricKind metric_kind_from_string(const std::string& s);

// Per-point provenance when generated from 1-dimensional pieces:
// piece id, segment id within the piece, arc parameter in [0, 1].
struct PointMeta {
  std::int32_t piece = -1;
  std::int32_t segment = -1;
  double t = 0.0;
};

class FiniteMetricSpace;
class NeighborIndex;

// Lazy distance evaluator for matrix-kind spaces that are too large to
// materialize. Implementations must be safe for concurrent queries.
class DistanceOracle {
 public:
  virtual ~DistanceOracle() = default;
  virtual double distance(PointId a, PointId b) const = 0;  // +inf allowed

  // Optional structure-aware neighbor index; nullptr means "use a generic
  // index". The returned index may reference both this oracle and the space.
  virtual std::unique_ptr<NeighborIndex> make_index(
      const FiniteMetricSpace& space) const {
    (void)space;
    return nullptr;
  }
};

// Point set + distance evaluation + named landmarks + per-point meta.
// Immutable after construction; safe to share across threads.
class FiniteMetricSpace {
 public:
  static FiniteMetricSpace coordinate_space(
      MetricKind kind,  // sup or euclidean
      std::vector<SparsePoint> points, std::map<std::string, PointId> landmarks,
      std::vector<PointMeta> meta, double resolution, std::string generator,
      nlohmann::json params);

  static FiniteMetricSpace matrix_space(std::shared_ptr<const DistanceMatrix> m,
                                        std::vector<SparsePoint> points,
                                        std::map<std::string, PointId> landmarks,
                                        std::vector<PointMeta> meta,
                                        double resolution, std::string generator,
                                        nlohmann::json params);

  static FiniteMetricSpace oracle_space(std::size_t n,
                                        std::shared_ptr<const DistanceOracle> o,
                                        std::vector<SparsePoint> points,
                                        std::map<std::string, PointId> landmarks,
                                        std::vector<PointMeta> meta,
                                        double resolution, std::string generator,
                                        nlohmann::json params);

  std::size_t size() const noexcept { return n_; }
  MetricKind kind() const noexcept { return kind_; }

  double distance(PointId a, PointId b) const;

  const SparsePoint& point(PointId id) const { return points_.at(id); }
  const std::vector<SparsePoint>& points() const noexcept { return points_; }
  const PointMeta& meta(PointId id) const { return meta_.at(id); }
  const std::vector<PointMeta>& metas() const noexcept { return meta_; }

  const std::map<std::string, PointId>& landmarks() const noexcept {
    return landmarks_;
  }
  PointId landmark(const std::string& name) const;
  std::optional<PointId> find_landmark(const std::string& name) const;

  // First point whose meta matches (piece, segment) with |t - t_query| <= tol.
  std::optional<PointId> find_by_meta(std::int32_t piece, std::int32_t segment,
                                      double t, double tol = 1e-9) const;

  // Sample spacing along 1-dimensional pieces; 0 when not applicable.
  double resolution() const noexcept { return resolution_; }

  const std::string& generator() const noexcept { return generator_; }
  const nlohmann::json& params() const noexcept { return params_; }

  const DistanceMatrix* matrix() const noexcept { return matrix_.get(); }
  std::shared_ptr<const DistanceMatrix> matrix_ptr() const noexcept {
    return matrix_;
  }
  const DistanceOracle* oracle() const noexcept { return oracle_.get(); }

 private:
  FiniteMetricSpace() = default;

  std::size_t n_ = 0;
  MetricKind kind_ = MetricKind::sup;
  std::vector<SparsePoint> points_;
  std::vector<PointMeta> meta_;
  std::map<std::string, PointId> landmarks_;
  std::shared_ptr<const DistanceMatrix> matrix_;
  std::shared_ptr<const DistanceOracle> oracle_;
  double resolution_ = 0.0;
  std::string generator_;
  nlohmann::json params_;
};

// Enumerates candidate neighbors of a point at scale eps. Implementations
// must emit every y != x with d(x, y) <= eps + kEdgeTol (emitting extra
// non-qualifying candidates is not allowed: the emitted distance is exact
// and the bound is enforced by each implementation).
class NeighborIndex {
 public:
  virtual ~NeighborIndex() = default;
  virtual void for_neighbors(
      PointId x, double eps,
      const std::function<void(PointId, double)>& emit) const = 0;
};

// Picks an index for the space: support-signature buckets for sup spaces,
// uniform grid hashing for large planar grids, matrix-row or pairwise scans
// otherwise. Oracle spaces may supply their own structure-aware index.
std::unique_ptr<NeighborIndex> build_neighbor_index(
    const FiniteMetricSpace& space);

}  // namespace chainmetric
