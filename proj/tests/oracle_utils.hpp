#pragma once

// Independent reference computations for tests. Everything here is written
// for clarity over speed and deliberately avoids the library's own chain
// machinery, so the two implementations can cross-check each other.

#include <cstdint>
#include <limits>
#include <random>
#include <vector>

#include "chainmetric/distance_matrix.hpp"
#include "chainmetric/space.hpp"
#include "chainmetric/util.hpp"

namespace chainmetric::testing {

// In-place all-pairs shortest-path closure (Floyd-Warshall). Plain double
// arithmetic: +inf absorbs, so disconnected blocks stay disconnected.
inline void fw_complete(DistanceMatrix& m) {
  std::size_t n = m.size();
  for (PointId k = 0; k < n; ++k)
    for (PointId i = 0; i < n; ++i) {
      if (i == k) continue;
      double ik = m.raw(i, k);
      if (ik == std::numeric_limits<double>::infinity()) continue;
      for (PointId j = i + 1; j < n; ++j) {
        if (j == k) continue;
        double via = ik + m.raw(k, j);
        if (via < m.raw(i, j)) m.set(i, j, via);
      }
    }
}

// Chain metric at hop bound eps as shortest paths over the graph that keeps
// exactly the pairs with d <= eps (+ the shared admission slack).
inline DistanceMatrix eps_graph_fw(const FiniteMetricSpace& s, double eps) {
  DistanceMatrix m(s.size());
  for (PointId i = 0; i < s.size(); ++i)
    for (PointId j = i + 1; j < s.size(); ++j) {
      double d = s.distance(i, j);
      if (d <= eps + kEdgeTol) m.set(i, j, d);
    }
  fw_complete(m);
  return m;
}

// Random finite metric with dyadic entries (multiples of 1/64), produced by
// shortest-path completion of a random weighted graph; optionally split in
// two blocks at infinite distance. Dyadic weights keep every path sum exact,
// so reference values are bit-stable across platforms.
inline DistanceMatrix random_dyadic_metric(std::mt19937_64& rng,
                                           std::size_t n) {
  DistanceMatrix m(n);
  std::uniform_int_distribution<int> w(1, 64);
  std::uniform_int_distribution<int> pct(0, 99);
  bool split = n >= 4 && pct(rng) < 30;
  std::vector<int> group(n, 0);
  if (split)
    for (std::size_t i = 0; i < n; ++i) group[i] = pct(rng) < 50 ? 0 : 1;
  for (PointId i = 0; i < n; ++i)
    for (PointId j = i + 1; j < n; ++j) {
      if (group[i] != group[j]) continue;
      if (pct(rng) < 75) m.set(i, j, w(rng) / 64.0);
    }
  fw_complete(m);
  return m;
}

}  // namespace chainmetric::testing
