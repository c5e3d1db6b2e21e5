#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "chainmetric/ext_real.hpp"

#include <json.hpp>

namespace chainmetric {

// Scale preset for the verification suite. Desk is the reference scale the
// claim table is stated at; smoke shrinks every space so the whole suite
// finishes in well under a minute; full grows the samples one notch where
// that sharpens the estimates.
enum class Preset { smoke, desk, full };

Preset preset_from_string(const std::string& name);  // throws on unknown
const char* to_string(Preset p);

// Per-claim resource guards. A claim whose literal evaluation would exceed
// them is recorded as skipped -- never silently shrunk, never failed.
struct VerifyLimits {
  std::size_t matrix_bytes = std::size_t(2) << 30;
  std::size_t point_cap = 250000;
};

struct VerifyConfig {
  Preset preset = Preset::desk;
  VerifyLimits limits;
  int threads = 0;  // 0 = CHAINMETRIC_THREADS, then hardware
};

// One verified claim. Equalities pin expected_lo == expected_hi; an
// expected infinity uses ExtReal::infinity() on both ends. `measured` is
// the claim's headline number; compound claims fold their sub-checks into
// `pass` and describe them in `note`.
struct ClaimRecord {
  int id = 0;           // 1-based, stable
  std::string tag;      // claim-family label, one of claim_tags()
  std::string space;    // generated-space summary
  std::string quantity; // what `measured` is
  ExtReal expected_lo{0.0};
  ExtReal expected_hi{0.0};
  ExtReal measured{0.0};
  bool pass = false;
  bool skipped = false;   // resource-cap abort; skipped claims never fail
  std::string note;
  double runtime_seconds = 0.0;  // excluded from the deterministic report
};

struct VerifyReport {
  Preset preset = Preset::desk;
  std::vector<ClaimRecord> claims;  // ordered by id
  bool all_pass = false;

  // Deterministic serialization: claims only, timing stripped; identical
  // config produces byte-identical text. Numbers are emitted as their
  // 17-significant-digit round-trip strings so infinities survive JSON.
  nlohmann::ordered_json claims_json() const;
  // claims_json plus a separate "timing" object (total and per-claim).
  nlohmann::ordered_json full_json() const;
  std::string table() const;  // fixed-width human-readable summary
};

// Registry of the claim-family tags, in claim-id order. Every ClaimRecord
// tag is one of these.
const std::vector<std::string>& claim_tags();

// Runs the ten-claim verification suite. Claims are independent of one
// another; each one generates what it measures and never reuses another
// claim's state.
VerifyReport run_verify_suite(const VerifyConfig& config);

// Parameter sweep for one generator between two landmarks: one CSV row per
// (h, eps) cell, h-major in grid order, columns
//   h, eps, estimate, runtime_seconds, hops
// with 17-digit numbers and "inf" for unreachable pairs. Every cell must
// respect eps >= 3h (throws std::invalid_argument otherwise). `constrained`
// restricts hops with the slit-crossing veto (slit-plane sweeps).
std::string sweep_csv(const std::string& generator,
                      const nlohmann::json& base_params,
                      const std::vector<double>& h_grid,
                      const std::vector<double>& eps_grid,
                      const std::string& from, const std::string& to,
                      bool constrained = false);

}  // namespace chainmetric
