#pragma once

#include <string>

#include "chainmetric/space.hpp"

#include <json.hpp>

namespace chainmetric {

// Sampled comparison spaces. Every generator is deterministic in its
// parameters: same inputs, bit-identical output (point order included).

// Infinite-dimensional sup-metric example: segment p->q of length 3 overlaid
// with K hook-shaped detours ("spines"), the k-th of total length 3 + 1/k,
// k = 2..K+1. Landmarks "p", "q". Sample spacing h along every segment.
FiniteMetricSpace generate_y(int K, double h);

// generate_y plus, for each spine k, a calibrated zigzag curve from p to the
// point (1/k, 0, ...) whose polyline length is exactly 3 + 1/k.
FiniteMetricSpace generate_x(int K, double h);

// Comb in the plane: base [0,1] on the x-axis plus unit vertical teeth at
// x = 0 and x = 1/k for every k with 1/k >= h; ambient Euclidean metric.
// Landmarks "p" = (0,0) and "tip" = (0,1).
FiniteMetricSpace generate_comb(double h);

// Grid sample of [-extent, extent]^2 with the closed slit {0} x [-1,1]
// removed; Euclidean metric; landmarks "p" = (-1,0), "q" = (1,0).
FiniteMetricSpace generate_slit_plane(double h, double extent);

// true iff the open segment (a,b) meets the closed slit {0} x [-1,1].
bool slit_crossing(const SparsePoint& a, const SparsePoint& b);

// Points j/D for 0 <= j <= D on the line, h = 1/D. Landmarks "p"=0, "q"=1.
FiniteMetricSpace generate_rational_grid(double h);

// Two vertices p, q joined by K disjoint arcs, arc k of length 1 + 1/k,
// sampled at spacing <= h; geodesic metric. Small spaces carry an explicit
// matrix, large ones a closed-form oracle.
FiniteMetricSpace generate_multi_edge(int K, double h);

// Dispatch by generator name with JSON parameters, as stored in space files.
FiniteMetricSpace generate_named(const std::string& name,
                                 const nlohmann::json& params);

// Sample ids along one generated piece, in arc order (sorted by segment,
// then arc parameter). When the piece starts at a landmark that was merged
// away by point dedup (the curve pieces of generate_x start at "p"), pass
// that landmark's name to have its id prepended. A piece can likewise end
// in a point owned by an earlier piece (those same curves end at spine axis
// ends); append the closing id by meta lookup when the full run matters.
std::vector<PointId> piece_path(const FiniteMetricSpace& s, std::int32_t piece,
                                const std::string& prepend_landmark = "");

}  // namespace chainmetric
