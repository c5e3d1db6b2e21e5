#pragma once

#include <cstddef>
#include <functional>
#include <string>

namespace chainmetric {

// Global tolerance for exact-arithmetic claims on dyadic/rational inputs.
inline constexpr double kTol = 1e-12;

// Slack applied when admitting an edge into the eps-graph: d <= eps + kEdgeTol.
inline constexpr double kEdgeTol = 1e-12;

// Effective worker count: explicit override > CHAINMETRIC_THREADS > hardware.
int thread_count(int override_threads = 0);

// Runs fn(i) for i in [0, n) on a static block partition. Results must go to
// disjoint slots; the partition is deterministic but the interleaving is not.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& fn,
                  int threads = 0);

// Round-trip formatting: %.17g, infinity rendered as "inf".
std::string fmt17(double v);

}  // namespace chainmetric
