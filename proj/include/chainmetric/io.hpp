#pragma once

#include <string>

#include "chainmetric/distance_matrix.hpp"
#include "chainmetric/space.hpp"

namespace chainmetric {

// Binary matrix file: magic "DMX1", point count as 64-bit little-endian,
// then the upper triangle (diagonal included) row-major as IEEE doubles.
// +infinity is stored as IEEE infinity.
void write_matrix(const std::string& path, const DistanceMatrix& m);
DistanceMatrix read_matrix(const std::string& path);

// Symmetric CSV, one row per point, "inf" for unreachable pairs.
void write_matrix_csv(const std::string& path, const DistanceMatrix& m);

// Space file: JSON {generator, params, metric_kind, points, matrix_file?}.
// Coordinate spaces store their points verbatim. Matrix-backed spaces write
// a DMX1 sidecar next to the JSON (name derived from `path` unless
// `matrix_file` is given). Oracle-backed spaces are stored as generator +
// params only and are re-generated on load, which requires a registered
// generator (generation is deterministic, so this round-trips bit-stably).
void save_space(const std::string& path, const FiniteMetricSpace& s,
                const std::string& matrix_file = "");
FiniteMetricSpace load_space(const std::string& path);

}  // namespace chainmetric
