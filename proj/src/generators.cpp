#include "chainmetric/generators.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "chainmetric/gluing.hpp"
#include "chainmetric/util.hpp"

namespace chainmetric {

namespace {

// Number of uniform steps covering `span` at spacing <= h.
int steps(double span, double h) {
  return std::max(1, static_cast<int>(std::ceil(span / h - 1e-9)));
}

// Endpoint-exact interpolation: i=0 and i=N return lo and hi bitwise, so
// shared corners of adjacent segments deduplicate exactly.
double lerp_exact(double lo, double hi, int i, int N) {
  if (i == 0) return lo;
  if (i == N) return hi;
  return lo + (hi - lo) * (double(i) / N);
}

// Collects points with first-emission-wins dedup, preserving the meta of
// the earliest mention. Emission order defines PointIds.
struct Emitter {
  std::vector<SparsePoint> pts;
  std::vector<PointMeta> meta;
  std::map<SparsePoint, PointId> seen;

  PointId emit(SparsePoint p, std::int32_t piece, std::int32_t segment,
               double t) {
    auto it = seen.find(p);
    if (it != seen.end()) return it->second;
    PointId id = static_cast<PointId>(pts.size());
    pts.push_back(p);
    meta.push_back({piece, segment, t});
    seen.emplace(std::move(p), id);
    return id;
  }
};

void check_y_params(const char* who, int K, double h, double h_bound) {
  if (K < 2) throw std::invalid_argument(std::string(who) + ": K >= 2");
  if (!(h > 0.0) || h > h_bound + kTol)
    throw std::invalid_argument(std::string(who) + ": h out of range");
}

// Shared by generate_y and generate_x: p plus the K hook-shaped spines.
// Spine k (k = 2..K+1), piece id k, oriented away from q:
//   segment 0: (1, t e_k),            t: 0 -> 1   (q up to the outer corner)
//   segment 1: ((1-u(1-1/k)) e_1 + e_k), u: 0 -> 1 (top, walking inward)
//   segment 2: (1/k e_1 + (1-v) e_k), v: 0 -> 1   (down to the axis)
// so (segment, parameter) sorts in arc order from q, and the arc position
// of a sample is t, 1 + u(1-1/k), 2 - 1/k + v respectively.
void emit_y(Emitter& em, int K, double h) {
  em.emit(SparsePoint::make({}), -1, 0, 0.0);  // p, the isolated landmark
  for (int k = 2; k <= K + 1; ++k) {
    double inner = 1.0 / k;
    int N0 = steps(1.0, h);
    for (int i = 0; i <= N0; ++i) {
      double t = lerp_exact(0.0, 1.0, i, N0);
      em.emit(SparsePoint::make({{1, 1.0}, {std::uint32_t(k), t}}), k, 0, t);
    }
    int N1 = steps(1.0 - inner, h);
    for (int i = 0; i <= N1; ++i) {
      double u = double(i) / N1;
      double x = lerp_exact(1.0, inner, i, N1);
      em.emit(SparsePoint::make({{1, x}, {std::uint32_t(k), 1.0}}), k, 1, u);
    }
    int N2 = steps(1.0, h);
    for (int i = 0; i <= N2; ++i) {
      double v = double(i) / N2;
      double y = lerp_exact(1.0, 0.0, i, N2);
      em.emit(SparsePoint::make({{1, inner}, {std::uint32_t(k), y}}), k, 2, v);
    }
  }
}

FiniteMetricSpace finish_y(Emitter& em, const char* generator, double h,
                           nlohmann::json params) {
  std::map<std::string, PointId> lms;
  lms["p"] = 0;
  lms["q"] = em.seen.at(SparsePoint::make({{1, 1.0}}));
  return FiniteMetricSpace::coordinate_space(
      MetricKind::sup, std::move(em.pts), std::move(lms), std::move(em.meta),
      h, generator, std::move(params));
}

}  // namespace

FiniteMetricSpace generate_y(int K, double h) {
  check_y_params("generate_y", K, h, 1.0 / (K + 1));
  Emitter em;
  emit_y(em, K, h);
  return finish_y(em, "y-spider", h, {{"K", K}, {"h", h}});
}

FiniteMetricSpace generate_x(int K, double h) {
  check_y_params("generate_x", K, h, 1.0 / ((K + 1.0) * (K + 1.0)));
  Emitter em;
  emit_y(em, K, h);

  // Curve k (piece id 1000+k) joins p to the axis point (1/k, 0, ...):
  // a diagonal segment p -> (1/(k+1), 1/(k+1) e_k), then a steep zigzag
  // whose k-th coordinate alternates between +-A while the first coordinate
  // advances to 1/k. Amplitude A <= 4h keeps the oscillation inside the
  // sampling scale; the flank count F calibrates total polyline sup-length
  // to exactly 3 + 1/k.
  for (int k = 2; k <= K + 1; ++k) {
    std::uint32_t uk = std::uint32_t(k);
    std::int32_t piece = 1000 + k;
    double t0 = 1.0 / (k + 1);
    double y0 = t0;
    double xe = 1.0 / k;
    double w = xe - t0;
    double target = 3.0 + xe;       // required length of the whole curve
    double tz = target - t0;        // zigzag share (diagonal contributes t0)
    double amax = std::min(4.0 * h, t0 / 2.0);
    int F = std::max(1, static_cast<int>(std::ceil((tz - y0) / (2.0 * amax))));
    double A = (tz - y0) / (2.0 * F);
    if (!(A > 0.0) || A > t0 + kTol)
      throw std::runtime_error("generate_x: calibration failure (amplitude)");

    // segment 0: the diagonal, sup-length t0
    int Nd = steps(t0, h);
    for (int i = 0; i <= Nd; ++i) {
      double s = lerp_exact(0.0, t0, i, Nd);
      em.emit(SparsePoint::make({{1, s}, {uk, s}}), piece, 0, double(i) / Nd);
    }

    // zigzag vertices: (t0,y0), then F alternating extrema, then (1/k, 0)
    std::vector<std::pair<double, double>> v;
    v.reserve(F + 2);
    v.push_back({t0, y0});
    for (int i = 1; i <= F; ++i)
      v.push_back({t0 + w * (double(i) / (F + 1)), (i % 2 ? -A : A)});
    v.push_back({xe, 0.0});

    double zig_len = 0.0;
    for (int f = 0; f + 1 < int(v.size()); ++f) {
      auto [ta, fa] = v[f];
      auto [tb, fb] = v[f + 1];
      double rise = std::fabs(fb - fa), run = tb - ta;
      if (rise < run - 1e-15)
        throw std::runtime_error("generate_x: calibration failure (flank "
                                 "not steep)");
      zig_len += rise;
      int Nf = steps(rise, h);
      for (int i = 0; i <= Nf; ++i) {
        double t = lerp_exact(ta, tb, i, Nf);
        double y = lerp_exact(fa, fb, i, Nf);
        em.emit(SparsePoint::make({{1, t}, {uk, y}}), piece, 1 + f,
                double(i) / Nf);
      }
    }
    if (std::fabs(t0 + zig_len - target) > 1e-9)
      throw std::runtime_error("generate_x: calibration failure (length)");
    for (const auto& [t, y] : v)
      if (std::fabs(y) > t + kTol)
        throw std::runtime_error("generate_x: calibration failure (envelope)");
  }
  return finish_y(em, "x-rectifiable", h, {{"K", K}, {"h", h}});
}

FiniteMetricSpace generate_comb(double h) {
  if (!(h > 0.0) || h > 0.5 + kTol)
    throw std::invalid_argument("generate_comb: need 0 < h <= 1/2");
  Emitter em;
  // piece 0: base [0,1] x {0}
  int Nb = steps(1.0, h);
  for (int i = 0; i <= Nb; ++i) {
    double x = lerp_exact(0.0, 1.0, i, Nb);
    em.emit(planar_point(x, 0.0), 0, 0, x);
  }
  // piece 1: tooth at x = 0; piece 1+k: tooth at x = 1/k, for 1/k >= h
  int teeth = static_cast<int>(std::floor(1.0 / h + 1e-9));
  int Nt = steps(1.0, h);
  for (int which = 0; which <= teeth; ++which) {
    double x = which == 0 ? 0.0 : 1.0 / which;
    for (int i = 0; i <= Nt; ++i) {
      double y = lerp_exact(0.0, 1.0, i, Nt);
      em.emit(planar_point(x, y), 1 + which, 0, y);
    }
  }
  std::map<std::string, PointId> lms;
  lms["p"] = em.seen.at(planar_point(0.0, 0.0));
  lms["tip"] = em.seen.at(planar_point(0.0, 1.0));
  return FiniteMetricSpace::coordinate_space(
      MetricKind::euclidean, std::move(em.pts), std::move(lms),
      std::move(em.meta), h, "comb", {{"h", h}});
}

FiniteMetricSpace generate_slit_plane(double h, double extent) {
  if (!(h > 0.0) || extent < 1.5 - kTol)
    throw std::invalid_argument("generate_slit_plane: bad parameters");
  double d_inv = 1.0 / h;
  long D = std::lround(d_inv);
  if (D < 1 || std::fabs(d_inv - double(D)) > 1e-9)
    throw std::invalid_argument(
        "generate_slit_plane: h must divide 1 so the landmarks are grid "
        "points");
  long N = static_cast<long>(std::floor(extent / h + 1e-9));
  std::vector<SparsePoint> pts;
  pts.reserve(std::size_t(2 * N + 1) * std::size_t(2 * N + 1));
  for (long i = -N; i <= N; ++i)
    for (long j = -N; j <= N; ++j) {
      if (i == 0 && std::labs(j) <= D) continue;  // closed slit removed
      pts.push_back(planar_point(double(i) / D, double(j) / D));
    }
  std::map<std::string, PointId> lms;
  for (PointId id = 0; id < pts.size(); ++id) {
    if (pts[id] == planar_point(-1.0, 0.0)) lms["p"] = id;
    if (pts[id] == planar_point(1.0, 0.0)) lms["q"] = id;
  }
  if (!lms.count("p") || !lms.count("q"))
    throw std::invalid_argument("generate_slit_plane: extent too small");
  return FiniteMetricSpace::coordinate_space(
      MetricKind::euclidean, std::move(pts), std::move(lms), {}, h,
      "slit-plane", {{"h", h}, {"extent", extent}});
}

bool slit_crossing(const SparsePoint& a, const SparsePoint& b) {
  double ax = a.coord(1), ay = a.coord(2);
  double bx = b.coord(1), by = b.coord(2);
  if (ax == 0.0 && bx == 0.0) {
    if (ay == by) return false;
    double lo = std::min(ay, by), hi = std::max(ay, by);
    return lo < 1.0 && hi > -1.0;  // open segment meets closed [-1,1]
  }
  if (ax == 0.0 || bx == 0.0) return false;  // grazes the line at an endpoint
  if ((ax > 0.0) == (bx > 0.0)) return false;
  double t = ax / (ax - bx);
  double y = ay + t * (by - ay);
  return std::fabs(y) <= 1.0;
}

FiniteMetricSpace generate_rational_grid(double h) {
  double d_inv = 1.0 / h;
  long D = std::lround(d_inv);
  if (D < 1 || std::fabs(d_inv - double(D)) > 1e-9)
    throw std::invalid_argument("generate_rational_grid: h must be 1/D");
  std::vector<SparsePoint> pts;
  std::vector<PointMeta> meta;
  for (long j = 0; j <= D; ++j) {
    double x = double(j) / D;
    pts.push_back(SparsePoint::make({{1, x}}));
    meta.push_back({0, 0, x});
  }
  std::map<std::string, PointId> lms{{"p", 0}, {"q", PointId(D)}};
  return FiniteMetricSpace::coordinate_space(
      MetricKind::sup, std::move(pts), std::move(lms), std::move(meta), h,
      "rational-grid", {{"h", h}});
}

namespace {

// Positions of the multi-edge samples: p, q, then arc k = 1..K sampled at
// interior positions i/N_k. All routes pass through p or q, so distances
// have a closed form; see arc_distance below.
struct MultiEdgeLayout {
  int K;
  std::vector<int> arc_of;       // per point; -1 for p, -2 for q
  std::vector<double> pos_of;    // arc position from p, in [0, L_k]

  static double len(int k) { return 1.0 + 1.0 / k; }
  double pq() const { return len(K); }

  double to_p(int k, double s) const { return std::min(s, len(k) - s + pq()); }
  double to_q(int k, double s) const { return std::min(len(k) - s, s + pq()); }

  double dist(PointId a, PointId b) const {
    if (a == b) return 0.0;
    int ka = arc_of[a], kb = arc_of[b];
    double sa = pos_of[a], sb = pos_of[b];
    if (ka == -1) std::swap(ka, kb), std::swap(sa, sb), std::swap(a, b);
    if (kb == -1) {  // b is p
      if (ka == -2) return pq();
      return to_p(ka, sa);
    }
    if (ka == -2) std::swap(ka, kb), std::swap(sa, sb);
    if (kb == -2) return to_q(ka, sa);
    if (ka == kb) {
      double Lk = len(ka);
      return std::min({std::fabs(sa - sb), sa + pq() + Lk - sb,
                       Lk - sa + pq() + sb});
    }
    return std::min(to_p(ka, sa) + std::min(sb, pq() + len(kb) - sb),
                    to_q(ka, sa) + std::min(len(kb) - sb, pq() + sb));
  }
};

class MultiEdgeOracle final : public DistanceOracle {
 public:
  explicit MultiEdgeOracle(MultiEdgeLayout l) : l_(std::move(l)) {}
  double distance(PointId a, PointId b) const override { return l_.dist(a, b); }

 private:
  MultiEdgeLayout l_;
};

constexpr std::size_t kExplicitMatrixCap = 4096;

}  // namespace

FiniteMetricSpace generate_multi_edge(int K, double h) {
  if (K < 1) throw std::invalid_argument("generate_multi_edge: K >= 1");
  if (!(h > 0.0) || h > 0.5 + kTol)
    throw std::invalid_argument("generate_multi_edge: need 0 < h <= 1/2");
  MultiEdgeLayout l;
  l.K = K;
  std::vector<PointMeta> meta;
  l.arc_of = {-1, -2};
  l.pos_of = {0.0, 0.0};
  meta.push_back({-1, 0, 0.0});
  meta.push_back({-1, 0, 1.0});
  for (int k = 1; k <= K; ++k) {
    double Lk = MultiEdgeLayout::len(k);
    int N = steps(Lk, h);
    for (int i = 1; i < N; ++i) {
      l.arc_of.push_back(k);
      l.pos_of.push_back(Lk * (double(i) / N));
      meta.push_back({k, 0, double(i) / N});
    }
  }
  std::size_t n = l.arc_of.size();
  std::vector<SparsePoint> pts(n);  // abstract graph: no coordinates
  std::map<std::string, PointId> lms{{"p", 0}, {"q", 1}};
  nlohmann::json params{{"K", K}, {"h", h}};
  if (n <= kExplicitMatrixCap) {
    auto m = std::make_shared<DistanceMatrix>(n);
    for (PointId i = 0; i < n; ++i)
      for (PointId j = i + 1; j < n; ++j) m->set(i, j, l.dist(i, j));
    return FiniteMetricSpace::matrix_space(std::move(m), std::move(pts),
                                           std::move(lms), std::move(meta), h,
                                           "multi-edge-graph", params);
  }
  auto o = std::make_shared<MultiEdgeOracle>(std::move(l));
  return FiniteMetricSpace::oracle_space(n, std::move(o), std::move(pts),
                                         std::move(lms), std::move(meta), h,
                                         "multi-edge-graph", params);
}

std::vector<PointId> piece_path(const FiniteMetricSpace& s, std::int32_t piece,
                                const std::string& prepend_landmark) {
  struct Row {
    std::int32_t segment;
    double t;
    PointId id;
    bool operator<(const Row& o) const {
      return segment != o.segment ? segment < o.segment
             : t != o.t           ? t < o.t
                                  : id < o.id;
    }
  };
  std::vector<Row> rows;
  for (PointId id = 0; id < s.metas().size(); ++id) {
    const PointMeta& m = s.meta(id);
    if (m.piece == piece) rows.push_back({m.segment, m.t, id});
  }
  std::sort(rows.begin(), rows.end());
  std::vector<PointId> out;
  out.reserve(rows.size() + 1);
  if (!prepend_landmark.empty()) out.push_back(s.landmark(prepend_landmark));
  for (const Row& r : rows) out.push_back(r.id);
  return out;
}

FiniteMetricSpace generate_named(const std::string& name,
                                 const nlohmann::json& params) {
  auto K = [&] { return params.at("K").get<int>(); };
  auto h = [&] { return params.at("h").get<double>(); };
  if (name == "y-spider") return generate_y(K(), h());
  if (name == "x-rectifiable") return generate_x(K(), h());
  if (name == "comb") return generate_comb(h());
  if (name == "slit-plane")
    return generate_slit_plane(h(), params.at("extent").get<double>());
  if (name == "rational-grid") return generate_rational_grid(h());
  if (name == "multi-edge-graph") return generate_multi_edge(K(), h());
  if (name == "yn-tower")
    return build_yn(params.at("n").get<int>(), params.at("M").get<int>(), K(),
                    h());
  throw std::invalid_argument("unknown generator: " + name);
}

}  // namespace chainmetric
