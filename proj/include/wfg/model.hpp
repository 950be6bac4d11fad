#pragma once

#include <cstddef>
#include <vector>

#include "wfg/errors.hpp"

namespace wfg {

// Relative tolerance for budget feasibility checks. All solvers are
// closed-form or finite-step, so near machine precision is attainable.
inline constexpr double kBudgetTol = 1e-9;

// Channel environment: per-channel weights pi_i and noise floors N0_i,
// held in canonical order (noise nondecreasing, ties stable). The
// permutation back to the caller's original channel order is retained.
struct ChannelProfile {
  std::vector<double> weights;
  std::vector<double> noise;
  std::vector<std::size_t> to_original;  // canonical position -> original index

  std::size_t size() const { return noise.size(); }
};

// A game instance: shared channels, a common crosstalk coefficient g and
// per-user power budgets, held with budgets sorted nonincreasing. The
// user permutation back to original order is retained.
struct GameSpec {
  ChannelProfile profile;
  double g = 0.0;
  std::vector<double> budgets;
  std::vector<std::size_t> user_to_original;  // canonical rank -> original index

  std::size_t users() const { return budgets.size(); }
  std::size_t channels() const { return profile.size(); }
};

// One user's per-channel power allocation.
struct Strategy {
  std::vector<double> powers;
};

// All users' allocations, one Strategy per user.
struct StrategyProfile {
  std::vector<Strategy> strategies;

  std::size_t users() const { return strategies.size(); }
};

// Validates raw channel data and sorts it into canonical order.
// Throws DimensionMismatch / NonPositiveValue.
ChannelProfile canonicalize_profile(const std::vector<double>& weights,
                                    const std::vector<double>& noise);

// Validates a full game instance: canonical channels (noise nondecreasing),
// canonical users (budgets nonincreasing), g in [0,1].
// Throws DimensionMismatch / NonPositiveValue / CrosstalkOutOfRange.
GameSpec validate_and_canonicalize(const std::vector<double>& weights,
                                   const std::vector<double>& noise,
                                   double g,
                                   const std::vector<double>& budgets);

// Mapping between canonical and original orders. De-canonicalization
// composed with canonicalization is the identity on raw inputs.
std::vector<double> to_original_channel_order(const ChannelProfile& profile,
                                              const std::vector<double>& canonical);
std::vector<double> to_canonical_channel_order(const ChannelProfile& profile,
                                               const std::vector<double>& original);
StrategyProfile to_original_orders(const GameSpec& spec, const StrategyProfile& canonical);
StrategyProfile to_canonical_orders(const GameSpec& spec, const StrategyProfile& original);

// Weighted power sum_i pi_i T_i of one strategy.
double weighted_power(const ChannelProfile& profile, const Strategy& strategy);

// |sum_i pi_i T_i - budget| <= kBudgetTol * max(1, budget).
bool budget_feasible(const ChannelProfile& profile, const Strategy& strategy, double budget);

// Interference-inclusive noise seen by `user`: N0_i + g * sum_{k != user} T^k_i.
std::vector<double> effective_noise(const ChannelProfile& profile, double g,
                                    std::size_t user, const StrategyProfile& all);

// Shannon rate of `user` in nats per symbol:
//   v^j = sum_i pi_i ln(1 + T^j_i / (N0_i + g sum_{k != j} T^k_i)).
double payoff(const ChannelProfile& profile, double g, std::size_t user,
              const StrategyProfile& all);

// sum_j payoff(j).
double sum_rate(const ChannelProfile& profile, double g, const StrategyProfile& all);

}  // namespace wfg
