#pragma once

#include <cstdint>
#include <cstddef>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "chainmetric/ext_real.hpp"

namespace chainmetric {

// Dense index into a space's point list; valid ids are exactly 0..n-1.
using PointId = std::uint32_t;

// Symmetric extended-real matrix with zero diagonal; +infinity means
// "no route". Entries are validated on write (nonnegative, never NaN);
// the metric axioms themselves are checked by validate_metric, not assumed.
class DistanceMatrix {
 public:
  explicit DistanceMatrix(std::size_t n);  // diagonal 0, off-diagonal +inf

  std::size_t size() const noexcept { return n_; }

  ExtReal at(PointId i, PointId j) const { return ExtReal(raw(i, j)); }
  double raw(PointId i, PointId j) const {
    return data_[std::size_t(i) * n_ + j];
  }

  // Sets both (i,j) and (j,i). Rejects negative/NaN, and nonzero diagonal.
  void set(PointId i, PointId j, double v);

  friend bool operator==(const DistanceMatrix& a, const DistanceMatrix& b) {
    return a.n_ == b.n_ && a.data_ == b.data_;
  }

 private:
  std::size_t n_;
  std::vector<double> data_;
};

// true iff same size and |a-b| <= tol entrywise (inf matches inf only).
bool entrywise_equal(const DistanceMatrix& a, const DistanceMatrix& b,
                     double tol);

struct TriangleViolation {
  PointId i, j, k;   // d(i,k) > d(i,j) + d(j,k) + tol
  double excess;
};

struct ValidationReport {
  bool symmetric_ok = true;
  bool diagonal_ok = true;
  bool positive_ok = true;  // off-diagonal entries > 0
  bool triangle_ok = true;
  bool exhaustive = false;  // whether every triple was checked
  std::size_t triples_checked = 0;
  std::vector<TriangleViolation> violations;           // capped
  std::vector<std::pair<PointId, PointId>> bad_pairs;  // symmetry/diag/positivity, capped

  bool valid() const {
    return symmetric_ok && diagonal_ok && positive_ok && triangle_ok;
  }

  // short tag of the first failed check, for error messages
  std::string describe_first_failure() const;
};

// Symmetry, zero diagonal and positivity are checked exhaustively; the
// triangle inequality exhaustively for n <= 512 and on sample_budget random
// triples (fixed seed) otherwise. Violations are report content, not errors.
ValidationReport validate_metric(const DistanceMatrix& m,
                                 std::size_t sample_budget = 200000);

enum class MetricRelation {
  equal,        // entrywise within tolerance
  leq,          // <= entrywise (reserved; equal is reported as equal)
  leq_strict,   // <= entrywise with at least one strictly smaller entry
  geq,          // >= entrywise (reserved)
  geq_strict,   // >= entrywise with at least one strictly greater entry
  incomparable  // strictly smaller somewhere and strictly greater elsewhere
};

const char* to_string(MetricRelation r);

struct MetricComparison {
  MetricRelation relation;
  // pair where m1 < m2 - tol, if any
  std::optional<std::pair<PointId, PointId>> less_witness;
  // pair where m1 > m2 + tol, if any
  std::optional<std::pair<PointId, PointId>> greater_witness;
};

// Entrywise comparison with infinity-aware semantics (inf == inf).
// Throws on dimension mismatch.
MetricComparison compare_metrics(const DistanceMatrix& m1,
                                 const DistanceMatrix& m2, double tol = 1e-12);

}  // namespace chainmetric
