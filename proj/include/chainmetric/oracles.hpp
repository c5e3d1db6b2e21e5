#pragma once

#include <functional>
#include <optional>

#include "chainmetric/ext_real.hpp"
#include "chainmetric/space.hpp"

namespace chainmetric {

// Closed-form evaluators for the three metrics of interest on a generated
// space: the sampled metric d, the chain-limit metric d0, and the intrinsic
// path-length metric dbar of the underlying continuum. Each evaluator
// returns nullopt where no closed form is available. Evaluators hold a
// pointer to the space they were built from; the space must outlive them.
struct AnalyticOracle {
  using Eval = std::function<std::optional<ExtReal>(PointId, PointId)>;
  Eval d;
  Eval d0;
  Eval dbar;
};

AnalyticOracle analytic_oracle_y(const FiniteMetricSpace& y);
AnalyticOracle analytic_oracle_x(const FiniteMetricSpace& x);
AnalyticOracle analytic_oracle_comb(const FiniteMetricSpace& comb);
AnalyticOracle analytic_oracle_slit(const FiniteMetricSpace& slit);
AnalyticOracle analytic_oracle_rational(const FiniteMetricSpace& grid);
AnalyticOracle analytic_oracle_multi_edge(const FiniteMetricSpace& edges);

}  // namespace chainmetric
