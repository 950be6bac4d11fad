#pragma once

#include <cstdint>
#include <span>

#include "wfg/model.hpp"

namespace wfg {

// One point of a price-of-anarchy sweep. poa = 1 - ne_sum_rate/opt_sum_rate;
// the optimizer is seeded with the equilibrium, so opt >= ne holds
// structurally.
struct PoaPoint {
  double g = 0.0;
  double ne_sum_rate = 0.0;
  double opt_sum_rate = 0.0;
  double poa = 0.0;
  std::vector<double> per_user_ne;   // canonical user order
  std::vector<double> per_user_opt;  // canonical user order
};

// Euclidean projection onto {x >= 0, sum_i weights_i x_i = budget} via the
// sort-based exact pivot search.
std::vector<double> project_weighted_simplex(std::span<const double> point,
                                             std::span<const double> weights,
                                             double budget);

// Gradient of the sum rate sum_j v^j with respect to every power variable
// (canonical orders). Includes the interference cross-terms: raising T^j_i
// helps user j and hurts every other user sharing channel i.
std::vector<std::vector<double>> sum_rate_gradient(const GameSpec& spec,
                                                   const StrategyProfile& all);

// Best sum-rate profile found by multi-start projected gradient ascent with
// Armijo backtracking: `starts` random feasible starts plus the Nash
// equilibrium as a warm start. Deterministic given seed; ties between starts
// break toward the lower start index. The sum rate is not concave, so this
// is a local-search benchmark, not a global certificate. Result is in
// canonical user/channel order.
StrategyProfile centralized_solve(const GameSpec& spec, std::size_t starts,
                                  std::uint64_t seed);

// Runs the equilibrium solver and the centralized benchmark over a grid of
// crosstalk values (each in [0,1)), keeping channels and budgets fixed.
// Deterministic given seed.
std::vector<PoaPoint> poa_sweep(const GameSpec& spec_template,
                                const std::vector<double>& g_grid,
                                std::size_t starts, std::uint64_t seed);

}  // namespace wfg
