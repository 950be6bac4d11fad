#include "wfg/iwfa.hpp"

#include <algorithm>
#include <cmath>

#include "wfg/single_wf.hpp"

namespace wfg {

namespace {

struct ResponseWithLevel {
  Strategy strategy;
  double water_level = 0.0;
};

// Water-fill against the interference-bearing noise. Mid-run that noise can
// be non-monotone (heavy opponents on good channels), so sort and undo.
ResponseWithLevel best_response_impl(const GameSpec& spec, std::size_t user,
                                     const StrategyProfile& all) {
  const std::vector<double> eff = effective_noise(spec.profile, spec.g, user, all);
  const ChannelProfile sorted = canonicalize_profile(spec.profile.weights, eff);
  const WaterfillSolution sol = waterfill_closed_form(sorted, spec.budgets[user]);

  ResponseWithLevel out;
  out.water_level = sol.water_level;
  out.strategy.powers.assign(spec.channels(), 0.0);
  for (std::size_t c = 0; c < spec.channels(); ++c) {
    out.strategy.powers[sorted.to_original[c]] = sol.strategy.powers[c];
  }
  return out;
}

double max_abs_diff(const std::vector<double>& a, const std::vector<double>& b) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
  return m;
}

}  // namespace

Strategy best_response(const GameSpec& spec, std::size_t user, const StrategyProfile& all) {
  if (user >= spec.users()) throw DimensionMismatch("user index out of range");
  return best_response_impl(spec, user, all).strategy;
}

std::pair<EquilibriumSolution, IwfaTrace> iwfa_solve(const GameSpec& spec,
                                                     const IwfaOptions& options) {
  if (!std::isfinite(spec.g) || spec.g < 0.0 || spec.g >= 1.0) {
    throw CrosstalkOutOfRange("iterative water-filling requires g in [0, 1)");
  }
  if (!(options.tol > 0.0)) throw InvalidBudget("tolerance must be positive");

  const std::size_t users = spec.users();
  StrategyProfile profile;
  if (options.warm_start) {
    profile = *options.warm_start;
    if (profile.users() != users) {
      throw DimensionMismatch("warm start user count does not match spec");
    }
  } else {
    profile.strategies.assign(users, Strategy{std::vector<double>(spec.channels(), 0.0)});
  }

  IwfaTrace trace;
  std::vector<double> omegas(users, 0.0);
  for (std::size_t round = 1; round <= options.max_rounds; ++round) {
    double delta = 0.0;
    for (std::size_t j = 0; j < users; ++j) {
      ResponseWithLevel response = best_response_impl(spec, j, profile);
      delta = std::max(delta, max_abs_diff(response.strategy.powers,
                                           profile.strategies[j].powers));
      omegas[j] = 1.0 / response.water_level;
      profile.strategies[j] = std::move(response.strategy);
    }
    trace.strategy_deltas.push_back(delta);
    trace.multiplier_history.push_back(omegas);
    if (options.record_profiles) trace.profile_history.push_back(profile);
    trace.iterations = round;
    if (delta <= options.tol) {
      trace.converged = true;
      break;
    }
  }
  trace.final_profile = profile;

  // Budgets are nonincreasing, so the implied multipliers are nondecreasing
  // up to convergence slack; monotonize before reconstructing thresholds.
  MultiplierSet multipliers;
  multipliers.omega = omegas;
  for (std::size_t j = 1; j < users; ++j) {
    multipliers.omega[j] = std::max(multipliers.omega[j], multipliers.omega[j - 1]);
  }

  EquilibriumSolution sol;
  sol.thresholds = thresholds_from_multipliers(multipliers, spec.g);
  sol.multipliers = std::move(multipliers);
  sol.breakpoints.resize(users);
  for (std::size_t j = 0; j < users; ++j) {
    const double active_eps = 1e-12 * std::max(1.0, spec.budgets[j]);
    std::size_t count = 0;
    for (double p : profile.strategies[j].powers) {
      if (p > active_eps) ++count;
    }
    sol.breakpoints[j] = count;
  }
  sol.payoffs.resize(users);
  for (std::size_t j = 0; j < users; ++j) {
    sol.payoffs[spec.user_to_original[j]] = payoff(spec.profile, spec.g, j, profile);
  }
  sol.strategies = to_original_orders(spec, profile);
  sol.user_to_original = spec.user_to_original;
  sol.channel_to_original = spec.profile.to_original;
  return {std::move(sol), std::move(trace)};
}

}  // namespace wfg
