#pragma once

#include <cstdint>
#include <initializer_list>
#include <utility>
#include <vector>

#include "chainmetric/ext_real.hpp"

namespace chainmetric {

// A point with finitely many nonzero coordinates, indices 1-based.
// Canonical form: coords sorted by index, no zero values, no duplicates —
// so equality and ordering are structural.
class SparsePoint {
 public:
  using Coord = std::pair<std::uint32_t, double>;

  SparsePoint() = default;

  // Canonicalizes: sorts by index, drops zeros. Rejects duplicate indices,
  // index 0, NaN and infinite values.
  static SparsePoint make(std::vector<Coord> cs);
  static SparsePoint make(std::initializer_list<Coord> cs) {
    return make(std::vector<Coord>(cs));
  }

  const std::vector<Coord>& coords() const noexcept { return coords_; }
  double coord(std::uint32_t index) const noexcept;
  bool empty() const noexcept { return coords_.empty(); }

  friend bool operator==(const SparsePoint& a, const SparsePoint& b) noexcept {
    return a.coords_ == b.coords_;
  }
  friend bool operator!=(const SparsePoint& a, const SparsePoint& b) noexcept {
    return !(a == b);
  }
  friend bool operator<(const SparsePoint& a, const SparsePoint& b) noexcept {
    return a.coords_ < b.coords_;
  }

 private:
  std::vector<Coord> coords_;
};

// Planar helper: coordinates (x, y) at indices 1, 2.
SparsePoint planar_point(double x, double y);

// max over the union of supports of |a_i - b_i|; 0 iff a == b.
ExtReal sup_distance(const SparsePoint& a, const SparsePoint& b);

// Euclidean distance over the union of supports.
ExtReal euclidean_distance(const SparsePoint& a, const SparsePoint& b);

}  // namespace chainmetric
