#include "chainmetric/sparse_point.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace chainmetric {

SparsePoint SparsePoint::make(std::vector<Coord> cs) {
  for (const auto& [idx, v] : cs) {
    if (idx == 0) throw std::invalid_argument("SparsePoint: index 0 (1-based)");
    if (std::isnan(v) || std::isinf(v))
      throw std::invalid_argument("SparsePoint: non-finite coordinate");
  }
  std::sort(cs.begin(), cs.end(),
            [](const Coord& a, const Coord& b) { return a.first < b.first; });
  for (std::size_t i = 1; i < cs.size(); ++i)
    if (cs[i].first == cs[i - 1].first)
      throw std::invalid_argument("SparsePoint: duplicate index " +
                                  std::to_string(cs[i].first));
  std::erase_if(cs, [](const Coord& c) { return c.second == 0.0; });
  SparsePoint p;
  p.coords_ = std::move(cs);
  return p;
}

double SparsePoint::coord(std::uint32_t index) const noexcept {
  auto it = std::lower_bound(
      coords_.begin(), coords_.end(), index,
      [](const Coord& c, std::uint32_t i) { return c.first < i; });
  return (it != coords_.end() && it->first == index) ? it->second : 0.0;
}

SparsePoint planar_point(double x, double y) {
  return SparsePoint::make({{1u, x}, {2u, y}});
}

namespace {

// Walks the union of two sorted supports, calling f(ai, bi) per index.
template <typename F>
void merge_supports(const SparsePoint& a, const SparsePoint& b, F&& f) {
  const auto& ca = a.coords();
  const auto& cb = b.coords();
  std::size_t i = 0, j = 0;
  while (i < ca.size() || j < cb.size()) {
    if (j == cb.size() || (i < ca.size() && ca[i].first < cb[j].first)) {
      f(ca[i].second, 0.0);
      ++i;
    } else if (i == ca.size() || cb[j].first < ca[i].first) {
      f(0.0, cb[j].second);
      ++j;
    } else {
      f(ca[i].second, cb[j].second);
      ++i;
      ++j;
    }
  }
}

}  // namespace

ExtReal sup_distance(const SparsePoint& a, const SparsePoint& b) {
  double m = 0.0;
  merge_supports(a, b, [&m](double x, double y) {
    double d = std::fabs(x - y);
    if (d > m) m = d;
  });
  return ExtReal(m);
}

ExtReal euclidean_distance(const SparsePoint& a, const SparsePoint& b) {
  double s = 0.0;
  merge_supports(a, b, [&s](double x, double y) {
    double d = x - y;
    s += d * d;
  });
  return ExtReal(std::sqrt(s));
}

}  // namespace chainmetric
