#pragma once

#include <memory>
#include <string>
#include <vector>

#include "chainmetric/space.hpp"

#include <json.hpp>

namespace chainmetric {

// One summand of a point-glued union: an existing space with every distance
// (and coordinate) multiplied by scale.
struct GluingPiece {
  std::shared_ptr<const FiniteMetricSpace> space;
  double scale = 1.0;
};

// Identify landmark_a of pieces[piece_a] with landmark_b of pieces[piece_b].
// Identifications accumulate transitively; the merged equivalence classes
// are the portals of the result.
struct Identification {
  std::size_t piece_a = 0;
  std::string landmark_a;
  std::size_t piece_b = 0;
  std::string landmark_b;
};

// Re-export pieces[piece]'s landmark under name in the result. Piece
// landmarks are always exported as "<piece>/<name>"; aliases add bare names
// on top (the towers keep "p" and "q" this way).
struct LandmarkAlias {
  std::string name;
  std::size_t piece = 0;
  std::string landmark;
};

struct GluingSpec {
  std::vector<GluingPiece> pieces;
  std::vector<Identification> identifications;
  std::vector<LandmarkAlias> aliases;
};

// Disjoint union of the scaled pieces with each identification class merged
// into a single point (the member from the lowest-numbered piece survives and
// keeps its scaled coordinates). The metric is the quotient metric: within a
// piece the scaled piece distance, across pieces the minimum over routes
// through portals, with the portal-to-portal graph closed once up front.
// Pieces meet only at points, so portal routes are exact, not approximate.
// Small results carry an explicit DistanceMatrix, large ones a lazy oracle
// with identical values (and a structure-aware neighbor index). Point meta is
// rewritten: meta.piece holds the piece index in spec order.
//
// Throws invalid_argument on empty/absent pieces, nonpositive scales, or
// identifications/aliases naming unknown pieces or landmarks.
FiniteMetricSpace glue(const GluingSpec& spec);

// Same, stamping the result with a caller-chosen generator tag and params.
FiniteMetricSpace glue(const GluingSpec& spec, std::string generator,
                       nlohmann::json params);

// Tower over generate_y. Level 1 is generate_y(K, h). Level n glues, for each
// m = 1..M, a chain of m copies of level n-1 scaled by 1/m: q of each copy is
// identified with p of the next, all chain heads merge into one point "p" and
// all chain tails into one point "q". h is sample spacing in result units at
// every level, so a 1/m-scaled copy is generated at spacing m*h in its own
// units (clamped to the generator's bound 1/(K+1)). Throws runtime_error when
// the projected point count exceeds point_cap.
FiniteMetricSpace build_yn(int n, int M, int K, double h,
                           std::size_t point_cap = 250000);

}  // namespace chainmetric
