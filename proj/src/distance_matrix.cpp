#include "chainmetric/distance_matrix.hpp"

#include <cmath>
#include <limits>
#include <random>
#include <stdexcept>
#include <string>

#include "chainmetric/util.hpp"

namespace chainmetric {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();
// n*n doubles; cap keeps a single matrix under ~2 GB.
constexpr std::size_t kMaxMatrixPoints = 16384;
constexpr std::size_t kMaxReported = 16;
}  // namespace

DistanceMatrix::DistanceMatrix(std::size_t n) : n_(n) {
  if (n == 0) throw std::invalid_argument("DistanceMatrix: empty");
  if (n > kMaxMatrixPoints)
    throw std::length_error("DistanceMatrix: " + std::to_string(n) +
                            " points exceeds dense-matrix cap " +
                            std::to_string(kMaxMatrixPoints));
  data_.assign(n * n, kInf);
  for (std::size_t i = 0; i < n; ++i) data_[i * n + i] = 0.0;
}

void DistanceMatrix::set(PointId i, PointId j, double v) {
  if (i >= n_ || j >= n_) throw std::out_of_range("DistanceMatrix::set");
  if (std::isnan(v) || v < 0.0)
    throw std::invalid_argument("DistanceMatrix: entry must be >= 0, not NaN");
  if (i == j && v != 0.0)
    throw std::invalid_argument("DistanceMatrix: nonzero diagonal");
  data_[std::size_t(i) * n_ + j] = v;
  data_[std::size_t(j) * n_ + i] = v;
}

bool entrywise_equal(const DistanceMatrix& a, const DistanceMatrix& b,
                     double tol) {
  if (a.size() != b.size()) return false;
  std::size_t n = a.size();
  for (PointId i = 0; i < n; ++i)
    for (PointId j = 0; j < n; ++j) {
      double x = a.raw(i, j), y = b.raw(i, j);
      if (std::isinf(x) || std::isinf(y)) {
        if (x != y) return false;
      } else if (std::fabs(x - y) > tol) {
        return false;
      }
    }
  return true;
}

namespace {

void check_triple(const DistanceMatrix& m, PointId i, PointId j, PointId k,
                  ValidationReport& rep) {
  // j is the midpoint: d(i,k) <= d(i,j) + d(j,k)
  double lhs = m.raw(i, k);
  double rhs = m.raw(i, j) + m.raw(j, k);
  if (lhs > rhs + kTol) {
    rep.triangle_ok = false;
    if (rep.violations.size() < kMaxReported)
      rep.violations.push_back({i, j, k, lhs - rhs});
  }
}

}  // namespace

ValidationReport validate_metric(const DistanceMatrix& m,
                                 std::size_t sample_budget) {
  ValidationReport rep;
  std::size_t n = m.size();

  for (PointId i = 0; i < n; ++i) {
    if (m.raw(i, i) != 0.0) {
      rep.diagonal_ok = false;
      if (rep.bad_pairs.size() < kMaxReported) rep.bad_pairs.push_back({i, i});
    }
    for (PointId j = i + 1; j < n; ++j) {
      if (m.raw(i, j) != m.raw(j, i)) {
        rep.symmetric_ok = false;
        if (rep.bad_pairs.size() < kMaxReported)
          rep.bad_pairs.push_back({i, j});
      }
      if (!(m.raw(i, j) > 0.0)) {
        rep.positive_ok = false;
        if (rep.bad_pairs.size() < kMaxReported)
          rep.bad_pairs.push_back({i, j});
      }
    }
  }

  if (n <= 512) {
    rep.exhaustive = true;
    for (PointId i = 0; i < n; ++i)
      for (PointId j = 0; j < n; ++j) {
        if (j == i) continue;
        for (PointId k = i + 1; k < n; ++k) {
          if (k == j) continue;
          check_triple(m, i, j, k, rep);
          ++rep.triples_checked;
        }
      }
  } else {
    std::mt19937_64 rng(0x5eed5eedULL);
    std::uniform_int_distribution<PointId> pick(0, PointId(n - 1));
    for (std::size_t s = 0; s < sample_budget; ++s) {
      PointId i = pick(rng), j = pick(rng), k = pick(rng);
      if (i == j || j == k || i == k) continue;
      check_triple(m, i, j, k, rep);
      ++rep.triples_checked;
    }
  }
  return rep;
}

const char* to_string(MetricRelation r) {
  switch (r) {
    case MetricRelation::equal: return "equal";
    case MetricRelation::leq: return "leq";
    case MetricRelation::leq_strict: return "leq-strict";
    case MetricRelation::geq: return "geq";
    case MetricRelation::geq_strict: return "geq-strict";
    case MetricRelation::incomparable: return "incomparable";
  }
  return "?";
}

MetricComparison compare_metrics(const DistanceMatrix& m1,
                                 const DistanceMatrix& m2, double tol) {
  if (m1.size() != m2.size())
    throw std::invalid_argument("compare_metrics: dimension mismatch");
  MetricComparison cmp;
  std::size_t n = m1.size();
  for (PointId i = 0; i < n; ++i)
    for (PointId j = i + 1; j < n; ++j) {
      double a = m1.raw(i, j), b = m2.raw(i, j);
      bool less, greater;
      if (std::isinf(a) || std::isinf(b)) {
        less = std::isinf(b) && !std::isinf(a);
        greater = std::isinf(a) && !std::isinf(b);
      } else {
        less = a < b - tol;
        greater = a > b + tol;
      }
      if (less && !cmp.less_witness) cmp.less_witness = {i, j};
      if (greater && !cmp.greater_witness) cmp.greater_witness = {i, j};
    }
  if (cmp.less_witness && cmp.greater_witness)
    cmp.relation = MetricRelation::incomparable;
  else if (cmp.less_witness)
    cmp.relation = MetricRelation::leq_strict;
  else if (cmp.greater_witness)
    cmp.relation = MetricRelation::geq_strict;
  else
    cmp.relation = MetricRelation::equal;
  return cmp;
}

std::string ValidationReport::describe_first_failure() const {
  if (!symmetric_ok) return "symmetry";
  if (!diagonal_ok) return "zero diagonal";
  if (!positive_ok) return "positivity";
  if (!triangle_ok) {
    if (!violations.empty()) {
      const TriangleViolation& v = violations.front();
      return "triangle inequality at (" + std::to_string(v.i) + "," +
             std::to_string(v.j) + "," + std::to_string(v.k) + ")";
    }
    return "triangle inequality";
  }
  return "nothing";
}

}  // namespace chainmetric
