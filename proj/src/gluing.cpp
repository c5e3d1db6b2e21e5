#include "chainmetric/gluing.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <map>
#include <memory>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "chainmetric/generators.hpp"
#include "chainmetric/util.hpp"

namespace chainmetric {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr std::size_t kGlueMatrixCap = 4096;

struct PortalRef {
  std::size_t piece = 0;
  PointId local = 0;
};

// Everything the quotient metric needs, shared by the lazy oracle, its
// neighbor index, and the explicit-matrix fill.
struct GluedLayout {
  std::vector<std::shared_ptr<const FiniteMetricSpace>> spaces;
  std::vector<double> scales;

  // Surviving location of each global id, and per piece the local -> global
  // map (members merged away map to their class representative).
  std::vector<PortalRef> owner;
  std::vector<std::vector<PointId>> global_of;

  // Identification classes: members per class, the (class, local) portals
  // present in each piece, each class representative's global id, and the
  // closed portal-to-portal distance matrix.
  std::size_t n_classes = 0;
  std::vector<std::vector<PortalRef>> class_members;
  std::vector<std::vector<std::pair<std::size_t, PointId>>> piece_portals;
  std::vector<PointId> class_global;
  std::vector<double> pg;

  double pg_at(std::size_t a, std::size_t b) const {
    return pg[a * n_classes + b];
  }

  double piece_dist(std::size_t piece, PointId a, PointId b) const {
    return scales[piece] * spaces[piece]->distance(a, b);
  }

  // Quotient distance: within-piece direct (when the survivors share a
  // piece) against every portal route leg_x + portal_path + leg_y. The
  // three-term sum is folded smaller-leg-first so the result is bitwise
  // symmetric in x and y.
  double distance(PointId x, PointId y) const {
    if (x == y) return 0.0;
    const PortalRef px = owner[x];
    const PortalRef py = owner[y];
    double best = px.piece == py.piece
                      ? piece_dist(px.piece, px.local, py.local)
                      : kInf;
    if (n_classes == 0) return best;
    const auto& xs = piece_portals[px.piece];
    const auto& ys = piece_portals[py.piece];
    for (const auto& [cx, lx] : xs) {
      const double a = piece_dist(px.piece, px.local, lx);
      if (!(a < best)) continue;
      for (const auto& [cy, ly] : ys) {
        const double b = piece_dist(py.piece, py.local, ly);
        const double lo = std::min(a, b);
        const double hi = std::max(a, b);
        const double total = (lo + pg_at(cx, cy)) + hi;
        if (total < best) best = total;
      }
    }
    return best;
  }
};

class GluedIndex final : public NeighborIndex {
 public:
  GluedIndex(std::shared_ptr<const GluedLayout> l,
             const FiniteMetricSpace& space)
      : l_(std::move(l)) {
    (void)space;
    // Pieces repeated in the spec (the towers reuse one space per scale)
    // share a sub-index.
    std::map<const FiniteMetricSpace*, std::shared_ptr<const NeighborIndex>>
        cache;
    sub_.reserve(l_->spaces.size());
    for (const auto& sp : l_->spaces) {
      auto& slot = cache[sp.get()];
      if (!slot) slot = build_neighbor_index(*sp);
      sub_.push_back(slot);
    }
  }

  void for_neighbors(
      PointId x, double eps,
      const std::function<void(PointId, double)>& emit) const override {
    const GluedLayout& L = *l_;
    const PortalRef px = L.owner[x];
    std::vector<PointId> cand;

    // Within-piece sweep, slightly inflated; exact filtering happens below.
    sub_[px.piece]->for_neighbors(
        px.local, (eps + 2 * kEdgeTol) / L.scales[px.piece],
        [&](PointId loc, double) {
          cand.push_back(L.global_of[px.piece][loc]);
        });

    if (L.n_classes > 0) {
      // Portal expansion: route cost is leg + portal_path + leg with every
      // term nonnegative, so classes and members over budget are skipped
      // before any sub-query runs. Most queries are nowhere near a portal
      // and do no cross-piece work at all.
      std::vector<double> leg(L.n_classes, kInf);
      for (const auto& [cls, loc] : L.piece_portals[px.piece])
        leg[cls] =
            std::min(leg[cls], L.piece_dist(px.piece, px.local, loc));
      for (std::size_t c = 0; c < L.n_classes; ++c) {
        if (!(leg[c] <= eps + 2 * kEdgeTol)) continue;
        for (std::size_t d = 0; d < L.n_classes; ++d) {
          const double budget = (eps + 2 * kEdgeTol) - (leg[c] + L.pg_at(c, d));
          if (!(budget >= 0.0)) continue;
          cand.push_back(L.class_global[d]);
          for (const PortalRef& m : L.class_members[d]) {
            const double r = (budget + kEdgeTol) / L.scales[m.piece];
            sub_[m.piece]->for_neighbors(m.local, r, [&](PointId loc, double) {
              cand.push_back(L.global_of[m.piece][loc]);
            });
          }
        }
      }
    }

    std::sort(cand.begin(), cand.end());
    cand.erase(std::unique(cand.begin(), cand.end()), cand.end());
    for (PointId y : cand) {
      if (y == x) continue;
      const double d = L.distance(x, y);
      if (d <= eps + kEdgeTol) emit(y, d);
    }
  }

 private:
  std::shared_ptr<const GluedLayout> l_;
  std::vector<std::shared_ptr<const NeighborIndex>> sub_;
};

class GluedOracle final : public DistanceOracle {
 public:
  explicit GluedOracle(std::shared_ptr<const GluedLayout> l)
      : l_(std::move(l)) {}

  double distance(PointId a, PointId b) const override {
    return l_->distance(a, b);
  }

  std::unique_ptr<NeighborIndex> make_index(
      const FiniteMetricSpace& space) const override {
    return std::make_unique<GluedIndex>(l_, space);
  }

 private:
  std::shared_ptr<const GluedLayout> l_;
};

SparsePoint scale_point(const SparsePoint& p, double s) {
  if (s == 1.0) return p;
  std::vector<SparsePoint::Coord> cs = p.coords();
  for (auto& c : cs) c.second *= s;
  return SparsePoint::make(std::move(cs));
}

}  // namespace

FiniteMetricSpace glue(const GluingSpec& spec, std::string generator,
                       nlohmann::json params) {
  const std::size_t P = spec.pieces.size();
  if (P == 0) throw std::invalid_argument("glue: no pieces");
  for (std::size_t i = 0; i < P; ++i) {
    const GluingPiece& g = spec.pieces[i];
    if (!g.space)
      throw std::invalid_argument("glue: piece " + std::to_string(i) +
                                  " is null");
    if (!(g.scale > 0.0) || !std::isfinite(g.scale))
      throw std::invalid_argument("glue: piece " + std::to_string(i) +
                                  " needs a positive finite scale");
  }

  auto layout = std::make_shared<GluedLayout>();
  layout->spaces.reserve(P);
  layout->scales.reserve(P);
  for (const GluingPiece& g : spec.pieces) {
    layout->spaces.push_back(g.space);
    layout->scales.push_back(g.scale);
  }

  auto resolve = [&](std::size_t piece, const std::string& name) -> PortalRef {
    if (piece >= P)
      throw std::invalid_argument("glue: piece index " + std::to_string(piece) +
                                  " out of range");
    auto id = spec.pieces[piece].space->find_landmark(name);
    if (!id)
      throw std::invalid_argument("glue: piece " + std::to_string(piece) +
                                  " has no landmark '" + name + "'");
    return {piece, *id};
  };

  // Union-find over the identified (piece, local) pairs. The map keeps
  // members in (piece, local) order, which fixes class numbering and makes
  // the whole construction deterministic.
  std::map<std::pair<std::size_t, PointId>, std::size_t> portal_node;
  std::vector<std::size_t> parent;
  auto node_of = [&](PortalRef r) {
    auto [it, fresh] = portal_node.try_emplace({r.piece, r.local}, parent.size());
    if (fresh) parent.push_back(it->second);
    return it->second;
  };
  auto find = [&](std::size_t a) {
    while (parent[a] != a) a = parent[a] = parent[parent[a]];
    return a;
  };
  for (const Identification& idf : spec.identifications) {
    std::size_t a = find(node_of(resolve(idf.piece_a, idf.landmark_a)));
    std::size_t b = find(node_of(resolve(idf.piece_b, idf.landmark_b)));
    if (a != b) parent[std::max(a, b)] = std::min(a, b);
  }

  // Number the classes by first appearance and collect members/portals.
  std::vector<std::int32_t> class_of_node(parent.size(), -1);
  layout->piece_portals.assign(P, {});
  for (const auto& [key, node] : portal_node) {
    std::size_t root = find(node);
    if (class_of_node[root] < 0) {
      class_of_node[root] = static_cast<std::int32_t>(layout->n_classes++);
      layout->class_members.emplace_back();
    }
    std::size_t cls = static_cast<std::size_t>(class_of_node[root]);
    layout->class_members[cls].push_back({key.first, key.second});
    layout->piece_portals[key.first].push_back({cls, key.second});
  }

  // Global ids in (piece, local) order; merged members adopt their class
  // representative (the first member, which owns coordinates and meta).
  layout->global_of.assign(P, {});
  std::vector<std::int32_t> class_rep(layout->n_classes, -1);
  for (std::size_t i = 0; i < P; ++i) {
    const std::size_t ni = spec.pieces[i].space->size();
    layout->global_of[i].resize(ni);
    for (PointId l = 0; l < ni; ++l) {
      auto it = portal_node.find({i, l});
      if (it != portal_node.end()) {
        std::size_t cls =
            static_cast<std::size_t>(class_of_node[find(it->second)]);
        if (class_rep[cls] >= 0) {
          layout->global_of[i][l] = static_cast<PointId>(class_rep[cls]);
          continue;
        }
        class_rep[cls] = static_cast<std::int32_t>(layout->owner.size());
      }
      layout->global_of[i][l] = static_cast<PointId>(layout->owner.size());
      layout->owner.push_back({i, l});
    }
  }
  layout->class_global.resize(layout->n_classes);
  for (std::size_t c = 0; c < layout->n_classes; ++c)
    layout->class_global[c] = static_cast<PointId>(class_rep[c]);

  // Portal-to-portal closure: seed with within-piece legs, then
  // Floyd-Warshall. Class counts stay small (one per joint), so the cubic
  // pass is negligible next to everything else.
  const std::size_t C = layout->n_classes;
  layout->pg.assign(C * C, kInf);
  for (std::size_t c = 0; c < C; ++c) layout->pg[c * C + c] = 0.0;
  for (std::size_t i = 0; i < P; ++i) {
    const auto& ports = layout->piece_portals[i];
    for (std::size_t a = 0; a < ports.size(); ++a)
      for (std::size_t b = a + 1; b < ports.size(); ++b) {
        const double w =
            layout->piece_dist(i, ports[a].second, ports[b].second);
        double& slot = layout->pg[ports[a].first * C + ports[b].first];
        if (w < slot) {
          slot = w;
          layout->pg[ports[b].first * C + ports[a].first] = w;
        }
      }
  }
  for (std::size_t k = 0; k < C; ++k)
    for (std::size_t a = 0; a < C; ++a) {
      const double ak = layout->pg[a * C + k];
      if (ak == kInf) continue;
      for (std::size_t b = 0; b < C; ++b) {
        const double v = ak + layout->pg[k * C + b];
        if (v < layout->pg[a * C + b]) layout->pg[a * C + b] = v;
      }
    }

  const std::size_t n = layout->owner.size();
  std::vector<SparsePoint> pts(n);
  std::vector<PointMeta> meta(n);
  for (std::size_t g = 0; g < n; ++g) {
    const PortalRef r = layout->owner[g];
    const FiniteMetricSpace& sp = *layout->spaces[r.piece];
    pts[g] = scale_point(sp.point(r.local), layout->scales[r.piece]);
    const PointMeta& src = sp.meta(r.local);
    meta[g] = {static_cast<std::int32_t>(r.piece), src.segment, src.t};
  }

  std::map<std::string, PointId> lms;
  for (std::size_t i = 0; i < P; ++i)
    for (const auto& [name, lid] : spec.pieces[i].space->landmarks())
      lms[std::to_string(i) + "/" + name] = layout->global_of[i][lid];
  for (const LandmarkAlias& a : spec.aliases) {
    if (a.name.empty()) throw std::invalid_argument("glue: empty alias name");
    const PortalRef r = resolve(a.piece, a.landmark);
    lms[a.name] = layout->global_of[r.piece][r.local];
  }

  double res = 0.0;
  for (std::size_t i = 0; i < P; ++i)
    if (layout->spaces[i]->resolution() > 0.0)
      res = std::max(res, layout->scales[i] * layout->spaces[i]->resolution());

  if (n <= kGlueMatrixCap) {
    auto m = std::make_shared<DistanceMatrix>(n);
    for (PointId i = 0; i < n; ++i)
      for (PointId j = i + 1; j < n; ++j) {
        const double d = layout->distance(i, j);
        if (d != kInf) m->set(i, j, d);
      }
    return FiniteMetricSpace::matrix_space(std::move(m), std::move(pts),
                                           std::move(lms), std::move(meta),
                                           res, std::move(generator),
                                           std::move(params));
  }
  auto o = std::make_shared<GluedOracle>(layout);
  return FiniteMetricSpace::oracle_space(n, std::move(o), std::move(pts),
                                         std::move(lms), std::move(meta), res,
                                         std::move(generator),
                                         std::move(params));
}

FiniteMetricSpace glue(const GluingSpec& spec) {
  return glue(spec, "glued",
              nlohmann::json{{"pieces", spec.pieces.size()},
                             {"identifications", spec.identifications.size()}});
}

FiniteMetricSpace build_yn(int n, int M, int K, double h,
                           std::size_t point_cap) {
  if (n < 1) throw std::invalid_argument("build_yn: n >= 1");
  if (M < 1) throw std::invalid_argument("build_yn: M >= 1");
  const double h_cap = 1.0 / double(K + 1);
  if (!(h > 0.0) || h > h_cap + kTol)
    throw std::invalid_argument("build_yn: need 0 < h <= 1/(K+1)");
  if (n == 1) return generate_y(K, h);

  // One space per scale: every copy in the m-chain reuses it. h means
  // result-unit spacing, so the 1/m-scaled copy samples at m*h in its own
  // units (clamped to the generator's bound).
  std::vector<std::shared_ptr<const FiniteMetricSpace>> level(M + 1);
  std::size_t raw = 0;
  for (int m = 1; m <= M; ++m) {
    const double hm = std::min(double(m) * h, h_cap);
    level[m] = std::make_shared<FiniteMetricSpace>(
        build_yn(n - 1, M, K, hm, point_cap));
    raw += std::size_t(m) * level[m]->size();
  }
  std::size_t merges = 2 * std::size_t(M - 1);  // chain heads + chain tails
  for (int m = 1; m <= M; ++m) merges += std::size_t(m - 1);  // joints
  const std::size_t projected = raw - merges;
  if (projected > point_cap)
    throw std::runtime_error("build_yn: projected point count " +
                             std::to_string(projected) + " exceeds cap " +
                             std::to_string(point_cap));

  GluingSpec spec;
  std::vector<std::vector<std::size_t>> idx(std::size_t(M) + 1);
  for (int m = 1; m <= M; ++m) {
    idx[m].resize(std::size_t(m) + 1);
    for (int j = 1; j <= m; ++j) {
      idx[m][j] = spec.pieces.size();
      spec.pieces.push_back({level[m], 1.0 / double(m)});
    }
  }
  for (int m = 1; m <= M; ++m)
    for (int j = 1; j < m; ++j)
      spec.identifications.push_back({idx[m][j], "q", idx[m][j + 1], "p"});
  for (int m = 2; m <= M; ++m) {
    spec.identifications.push_back({idx[1][1], "p", idx[m][1], "p"});
    spec.identifications.push_back({idx[1][1], "q", idx[m][m], "q"});
  }
  spec.aliases.push_back({"p", idx[1][1], "p"});
  spec.aliases.push_back({"q", idx[1][1], "q"});
  return glue(spec, "yn-tower",
              nlohmann::json{{"n", n}, {"M", M}, {"K", K}, {"h", h}});
}

}  // namespace chainmetric
