#pragma once

#include <cstdint>

#include "wfg/model.hpp"

namespace wfg {

// First-order certificate for a strategy profile. For each user the implied
// multiplier is the median of 1/(T^j_i + N0_i + g sum_{k!=j} T^k_i) over its
// active channels; residuals measure deviation from the equal-marginal
// condition (active channels) and violation of the inequality branch
// (inactive channels).
struct KktReport {
  std::vector<std::vector<double>> residuals;  // per user, per channel
  double max_residual = 0.0;
  std::vector<double> implied_multipliers;     // omega-hat per user
  bool satisfied = false;
};

// Certifies `all` against the equilibrium first-order conditions at the
// given residual threshold. A channel counts as active when
// T^j_i > 1e-12 * budget_j. Requires a feasible profile (budgets met to
// kBudgetTol, powers nonnegative); throws InfeasibleProfile otherwise.
// Accepts g in [0,1].
KktReport kkt_check(const GameSpec& spec, const StrategyProfile& all, double threshold);

// gap_j = v^j(best response to others) - v^j(current), one entry per user
// (canonical order). Nonnegative up to rounding; <= 1e-8 at equilibrium.
// The profile only needs the right shape and nonnegative entries: the gap of
// an underspent user (e.g. the all-zero profile) is still well defined.
std::vector<double> best_response_gap(const GameSpec& spec, const StrategyProfile& all);

// For g = 1 every equilibrium shares the same per-channel aggregate
// A_i = [1/omega - N0_i]_+, with omega from the single water-fill of the
// pooled budget; only the split of A among users is free. Returns `count`
// distinct feasible splits (canonical orders), generated by budget- and
// aggregate-preserving shift moves from the proportional split. All returned
// profiles satisfy the first-order conditions with one common multiplier.
// Throws CrosstalkNotOne / InfeasibleSplit.
std::vector<StrategyProfile> continuum_g1(const GameSpec& spec, std::size_t count,
                                          std::uint64_t seed);

}  // namespace wfg
