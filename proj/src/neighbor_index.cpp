#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <unordered_map>
#include <vector>

#include "chainmetric/space.hpp"
#include "chainmetric/util.hpp"

namespace chainmetric {

namespace {

class BruteIndex final : public NeighborIndex {
 public:
  explicit BruteIndex(const FiniteMetricSpace& s) : s_(s) {}

  void for_neighbors(PointId x, double eps,
                     const std::function<void(PointId, double)>& emit)
      const override {
    std::size_t n = s_.size();
    for (PointId y = 0; y < n; ++y) {
      if (y == x) continue;
      double d = s_.distance(x, y);
      if (d <= eps + kEdgeTol) emit(y, d);
    }
  }

 private:
  const FiniteMetricSpace& s_;
};

// Sup-metric index. Points are bucketed by support signature (the set of
// nonzero coordinate indices); inside a bucket they are sorted by the value
// of the signature's first coordinate, which gives a search window since
// |y_c - x_c| <= sup_distance(x, y) for any coordinate c.
class SupportBucketIndex final : public NeighborIndex {
 public:
  explicit SupportBucketIndex(const FiniteMetricSpace& s) : s_(s) {
    std::map<std::vector<std::uint32_t>, std::vector<std::pair<double, PointId>>>
        by_sig;
    std::vector<std::uint32_t> sig;
    for (PointId id = 0; id < s.size(); ++id) {
      const auto& cs = s.point(id).coords();
      sig.clear();
      for (const auto& [idx, v] : cs) sig.push_back(idx);
      double key = sig.empty() ? 0.0 : cs.front().second;
      by_sig[sig].push_back({key, id});
    }
    buckets_.reserve(by_sig.size());
    for (auto& [signature, entries] : by_sig) {
      std::sort(entries.begin(), entries.end());
      buckets_.push_back({signature, std::move(entries)});
    }
  }

  void for_neighbors(PointId x, double eps,
                     const std::function<void(PointId, double)>& emit)
      const override {
    const SparsePoint& px = s_.point(x);
    double bound = eps + kEdgeTol;
    for (const Bucket& b : buckets_) {
      // x has a nonzero coordinate outside the bucket's support: every
      // bucket point has 0 there, so require |x_i| <= bound
      bool reject = false;
      {
        auto it = b.signature.begin();
        for (const auto& [idx, v] : px.coords()) {
          while (it != b.signature.end() && *it < idx) ++it;
          if ((it == b.signature.end() || *it != idx) &&
              std::fabs(v) > bound) {
            reject = true;
            break;
          }
        }
      }
      if (reject) continue;
      if (b.signature.empty()) {
        for (const auto& [key, id] : b.entries) scan_one(x, id, bound, emit);
        continue;
      }
      double xc = px.coord(b.signature[0]);
      auto lo = std::lower_bound(b.entries.begin(), b.entries.end(),
                                 std::pair<double, PointId>{xc - bound, 0});
      for (auto it2 = lo; it2 != b.entries.end() && it2->first <= xc + bound;
           ++it2)
        scan_one(x, it2->second, bound, emit);
    }
  }

 private:
  struct Bucket {
    std::vector<std::uint32_t> signature;
    std::vector<std::pair<double, PointId>> entries;  // (first coord, id)
  };

  void scan_one(PointId x, PointId y, double bound,
                const std::function<void(PointId, double)>& emit) const {
    if (y == x) return;
    double d = sup_distance(s_.point(x), s_.point(y)).value();
    if (d <= bound) emit(y, d);
  }

  const FiniteMetricSpace& s_;
  std::vector<Bucket> buckets_;
};

// Uniform grid hash over planar points (coordinates at indices 1, 2).
class GridIndex2D final : public NeighborIndex {
 public:
  explicit GridIndex2D(const FiniteMetricSpace& s) : s_(s) {
    double min_x = 0, max_x = 0, min_y = 0, max_y = 0;
    bool first = true;
    for (PointId id = 0; id < s.size(); ++id) {
      double x = s.point(id).coord(1), y = s.point(id).coord(2);
      if (first) {
        min_x = max_x = x;
        min_y = max_y = y;
        first = false;
      } else {
        min_x = std::min(min_x, x);
        max_x = std::max(max_x, x);
        min_y = std::min(min_y, y);
        max_y = std::max(max_y, y);
      }
    }
    origin_ = std::min(min_x, min_y);
    double area = std::max(max_x - min_x, 1e-12) *
                  std::max(max_y - min_y, 1e-12);
    cell_ = std::max(std::sqrt(area / std::max<std::size_t>(s.size(), 1)),
                     1e-12);
    for (PointId id = 0; id < s.size(); ++id)
      cells_[key_of(s.point(id).coord(1), s.point(id).coord(2))].push_back(id);
  }

  void for_neighbors(PointId x, double eps,
                     const std::function<void(PointId, double)>& emit)
      const override {
    const SparsePoint& px = s_.point(x);
    double cx = px.coord(1), cy = px.coord(2);
    double bound = eps + kEdgeTol;
    std::int64_t ix0 = cell_coord(cx - bound), ix1 = cell_coord(cx + bound);
    std::int64_t iy0 = cell_coord(cy - bound), iy1 = cell_coord(cy + bound);
    for (std::int64_t ix = ix0; ix <= ix1; ++ix)
      for (std::int64_t iy = iy0; iy <= iy1; ++iy) {
        auto it = cells_.find(pack(ix, iy));
        if (it == cells_.end()) continue;
        for (PointId y : it->second) {
          if (y == x) continue;
          double d = euclidean_distance(px, s_.point(y)).value();
          if (d <= bound) emit(y, d);
        }
      }
  }

 private:
  std::int64_t cell_coord(double v) const {
    return static_cast<std::int64_t>(std::floor((v - origin_) / cell_));
  }
  std::uint64_t key_of(double x, double y) const {
    return pack(cell_coord(x), cell_coord(y));
  }
  static std::uint64_t pack(std::int64_t ix, std::int64_t iy) {
    return (static_cast<std::uint64_t>(static_cast<std::uint32_t>(ix)) << 32) |
           static_cast<std::uint32_t>(iy);
  }

  const FiniteMetricSpace& s_;
  double origin_ = 0, cell_ = 1;
  std::unordered_map<std::uint64_t, std::vector<PointId>> cells_;
};

bool is_planar(const FiniteMetricSpace& s) {
  for (PointId id = 0; id < s.size(); ++id)
    for (const auto& [idx, v] : s.point(id).coords())
      if (idx > 2) return false;
  return true;
}

constexpr std::size_t kBruteCutoff = 20000;

}  // namespace

std::unique_ptr<NeighborIndex> build_neighbor_index(
    const FiniteMetricSpace& space) {
  if (space.oracle()) {
    if (auto idx = space.oracle()->make_index(space)) return idx;
  }
  switch (space.kind()) {
    case MetricKind::sup:
      return std::make_unique<SupportBucketIndex>(space);
    case MetricKind::euclidean:
      if (space.size() >= kBruteCutoff && is_planar(space))
        return std::make_unique<GridIndex2D>(space);
      return std::make_unique<BruteIndex>(space);
    case MetricKind::matrix:
      return std::make_unique<BruteIndex>(space);
  }
  return std::make_unique<BruteIndex>(space);
}

}  // namespace chainmetric
