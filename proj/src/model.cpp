#include "wfg/model.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace wfg {

namespace {

void require_positive_finite(const std::vector<double>& values, const char* what) {
  for (double v : values) {
    if (!std::isfinite(v) || v <= 0.0) {
      throw NonPositiveValue(std::string(what) + " must be positive and finite");
    }
  }
}

void check_profile_dims(const ChannelProfile& profile, const StrategyProfile& all) {
  for (const Strategy& s : all.strategies) {
    if (s.powers.size() != profile.size()) {
      throw DimensionMismatch("strategy length does not match channel count");
    }
  }
}

}  // namespace

ChannelProfile canonicalize_profile(const std::vector<double>& weights,
                                    const std::vector<double>& noise) {
  if (noise.empty()) throw DimensionMismatch("channel data must be nonempty");
  if (weights.size() != noise.size()) {
    throw DimensionMismatch("weights and noise must have equal length");
  }
  require_positive_finite(weights, "channel weights");
  require_positive_finite(noise, "noise floors");

  std::vector<std::size_t> order(noise.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return noise[a] < noise[b]; });

  ChannelProfile profile;
  profile.weights.reserve(noise.size());
  profile.noise.reserve(noise.size());
  for (std::size_t idx : order) {
    profile.weights.push_back(weights[idx]);
    profile.noise.push_back(noise[idx]);
  }
  profile.to_original = std::move(order);
  return profile;
}

GameSpec validate_and_canonicalize(const std::vector<double>& weights,
                                   const std::vector<double>& noise,
                                   double g,
                                   const std::vector<double>& budgets) {
  GameSpec spec;
  spec.profile = canonicalize_profile(weights, noise);
  if (!std::isfinite(g) || g < 0.0 || g > 1.0) {
    throw CrosstalkOutOfRange("crosstalk coefficient must lie in [0, 1]");
  }
  spec.g = g;
  if (budgets.empty()) throw DimensionMismatch("at least one budget is required");
  require_positive_finite(budgets, "power budgets");

  std::vector<std::size_t> order(budgets.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return budgets[a] > budgets[b]; });
  spec.budgets.reserve(budgets.size());
  for (std::size_t idx : order) spec.budgets.push_back(budgets[idx]);
  spec.user_to_original = std::move(order);
  return spec;
}

std::vector<double> to_original_channel_order(const ChannelProfile& profile,
                                              const std::vector<double>& canonical) {
  if (canonical.size() != profile.size()) {
    throw DimensionMismatch("vector length does not match channel count");
  }
  std::vector<double> original(canonical.size());
  for (std::size_t c = 0; c < canonical.size(); ++c) {
    original[profile.to_original[c]] = canonical[c];
  }
  return original;
}

std::vector<double> to_canonical_channel_order(const ChannelProfile& profile,
                                               const std::vector<double>& original) {
  if (original.size() != profile.size()) {
    throw DimensionMismatch("vector length does not match channel count");
  }
  std::vector<double> canonical(original.size());
  for (std::size_t c = 0; c < original.size(); ++c) {
    canonical[c] = original[profile.to_original[c]];
  }
  return canonical;
}

StrategyProfile to_original_orders(const GameSpec& spec, const StrategyProfile& canonical) {
  if (canonical.users() != spec.users()) {
    throw DimensionMismatch("profile user count does not match spec");
  }
  StrategyProfile original;
  original.strategies.resize(spec.users());
  for (std::size_t c = 0; c < spec.users(); ++c) {
    original.strategies[spec.user_to_original[c]].powers =
        to_original_channel_order(spec.profile, canonical.strategies[c].powers);
  }
  return original;
}

StrategyProfile to_canonical_orders(const GameSpec& spec, const StrategyProfile& original) {
  if (original.users() != spec.users()) {
    throw DimensionMismatch("profile user count does not match spec");
  }
  StrategyProfile canonical;
  canonical.strategies.resize(spec.users());
  for (std::size_t c = 0; c < spec.users(); ++c) {
    canonical.strategies[c].powers = to_canonical_channel_order(
        spec.profile, original.strategies[spec.user_to_original[c]].powers);
  }
  return canonical;
}

double weighted_power(const ChannelProfile& profile, const Strategy& strategy) {
  if (strategy.powers.size() != profile.size()) {
    throw DimensionMismatch("strategy length does not match channel count");
  }
  double total = 0.0;
  for (std::size_t i = 0; i < profile.size(); ++i) {
    total += profile.weights[i] * strategy.powers[i];
  }
  return total;
}

bool budget_feasible(const ChannelProfile& profile, const Strategy& strategy, double budget) {
  const double spent = weighted_power(profile, strategy);
  return std::abs(spent - budget) <= kBudgetTol * std::max(1.0, budget);
}

std::vector<double> effective_noise(const ChannelProfile& profile, double g,
                                    std::size_t user, const StrategyProfile& all) {
  check_profile_dims(profile, all);
  if (user >= all.users()) throw DimensionMismatch("user index out of range");
  std::vector<double> noise = profile.noise;
  for (std::size_t k = 0; k < all.users(); ++k) {
    if (k == user) continue;
    for (std::size_t i = 0; i < profile.size(); ++i) {
      noise[i] += g * all.strategies[k].powers[i];
    }
  }
  return noise;
}

double payoff(const ChannelProfile& profile, double g, std::size_t user,
              const StrategyProfile& all) {
  const std::vector<double> denom = effective_noise(profile, g, user, all);
  double rate = 0.0;
  for (std::size_t i = 0; i < profile.size(); ++i) {
    rate += profile.weights[i] * std::log1p(all.strategies[user].powers[i] / denom[i]);
  }
  return rate;
}

double sum_rate(const ChannelProfile& profile, double g, const StrategyProfile& all) {
  double total = 0.0;
  for (std::size_t j = 0; j < all.users(); ++j) total += payoff(profile, g, j, all);
  return total;
}

}  // namespace wfg
