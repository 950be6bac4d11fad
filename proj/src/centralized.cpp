#include "wfg/centralized.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

#include "wfg/game_ne.hpp"

namespace wfg {

namespace {

constexpr double kStationarityTol = 1e-7;
constexpr double kArmijoSlope = 1e-4;
constexpr std::size_t kMaxAscentIters = 20000;

StrategyProfile project_profile(const GameSpec& spec, const StrategyProfile& raw) {
  StrategyProfile out;
  out.strategies.resize(spec.users());
  for (std::size_t j = 0; j < spec.users(); ++j) {
    out.strategies[j].powers = project_weighted_simplex(
        raw.strategies[j].powers, spec.profile.weights, spec.budgets[j]);
  }
  return out;
}

StrategyProfile stepped(const GameSpec& spec, const StrategyProfile& base,
                        const std::vector<std::vector<double>>& grad, double step) {
  StrategyProfile moved = base;
  for (std::size_t j = 0; j < spec.users(); ++j) {
    for (std::size_t i = 0; i < spec.channels(); ++i) {
      moved.strategies[j].powers[i] += step * grad[j][i];
    }
  }
  return project_profile(spec, moved);
}

double inner_with_move(const std::vector<std::vector<double>>& grad,
                       const StrategyProfile& from, const StrategyProfile& to) {
  double acc = 0.0;
  for (std::size_t j = 0; j < grad.size(); ++j) {
    for (std::size_t i = 0; i < grad[j].size(); ++i) {
      acc += grad[j][i] * (to.strategies[j].powers[i] - from.strategies[j].powers[i]);
    }
  }
  return acc;
}

double move_norm(const StrategyProfile& from, const StrategyProfile& to) {
  double worst = 0.0;
  for (std::size_t j = 0; j < from.users(); ++j) {
    double acc = 0.0;
    for (std::size_t i = 0; i < from.strategies[j].powers.size(); ++i) {
      const double d = to.strategies[j].powers[i] - from.strategies[j].powers[i];
      acc += d * d;
    }
    worst = std::max(worst, std::sqrt(acc));
  }
  return worst;
}

// Projected gradient ascent with Armijo backtracking along the projection
// arc. Stops once the unit-step projected gradient is negligible.
StrategyProfile ascend(const GameSpec& spec, StrategyProfile point) {
  double value = sum_rate(spec.profile, spec.g, point);
  for (std::size_t iter = 0; iter < kMaxAscentIters; ++iter) {
    const std::vector<std::vector<double>> grad = sum_rate_gradient(spec, point);
    const StrategyProfile full_step = stepped(spec, point, grad, 1.0);
    if (move_norm(point, full_step) <= kStationarityTol) break;

    double step = 1.0;
    bool accepted = false;
    while (step > 1e-16) {
      const StrategyProfile candidate =
          step == 1.0 ? full_step : stepped(spec, point, grad, step);
      const double candidate_value = sum_rate(spec.profile, spec.g, candidate);
      const double expected_gain = inner_with_move(grad, point, candidate);
      if (candidate_value >= value + kArmijoSlope * expected_gain) {
        point = candidate;
        value = candidate_value;
        accepted = true;
        break;
      }
      step *= 0.5;
    }
    if (!accepted) break;
  }
  return point;
}

StrategyProfile random_feasible_profile(const GameSpec& spec, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> uniform(0.0, 1.0);
  StrategyProfile out;
  out.strategies.resize(spec.users());
  for (std::size_t j = 0; j < spec.users(); ++j) {
    std::vector<double>& powers = out.strategies[j].powers;
    powers.resize(spec.channels());
    double weighted = 0.0;
    for (std::size_t i = 0; i < spec.channels(); ++i) {
      powers[i] = -std::log(1.0 - uniform(rng));  // Exp(1), a Dirichlet draw up to scale
      weighted += spec.profile.weights[i] * powers[i];
    }
    const double scale = spec.budgets[j] / weighted;
    for (double& p : powers) p *= scale;
  }
  return out;
}

}  // namespace

std::vector<double> project_weighted_simplex(std::span<const double> point,
                                             std::span<const double> weights,
                                             double budget) {
  const std::size_t n = point.size();
  if (weights.size() != n || n == 0) {
    throw DimensionMismatch("projection needs matching nonempty point and weights");
  }
  if (!(budget > 0.0)) throw InvalidBudget("projection budget must be positive");

  // Solution has the form x_i = max(0, y_i - lambda w_i); the active set is a
  // prefix of channels ordered by y_i / w_i.
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return point[a] / weights[a] > point[b] / weights[b];
  });

  double weighted_sum = 0.0;
  double weight_sq_sum = 0.0;
  double lambda = 0.0;
  for (std::size_t t = 0; t < n; ++t) {
    const std::size_t i = order[t];
    weighted_sum += weights[i] * point[i];
    weight_sq_sum += weights[i] * weights[i];
    const double candidate = (weighted_sum - budget) / weight_sq_sum;
    if (t + 1 == n || candidate >= point[order[t + 1]] / weights[order[t + 1]]) {
      lambda = candidate;
      break;
    }
  }

  std::vector<double> projected(n);
  for (std::size_t i = 0; i < n; ++i) {
    projected[i] = std::max(0.0, point[i] - lambda * weights[i]);
  }
  return projected;
}

std::vector<std::vector<double>> sum_rate_gradient(const GameSpec& spec,
                                                   const StrategyProfile& all) {
  const std::size_t users = spec.users();
  const std::size_t n = spec.channels();
  if (all.users() != users) throw DimensionMismatch("profile user count does not match spec");

  std::vector<double> aggregate(n, 0.0);
  for (const Strategy& s : all.strategies) {
    if (s.powers.size() != n) throw DimensionMismatch("strategy length mismatch");
    for (std::size_t i = 0; i < n; ++i) aggregate[i] += s.powers[i];
  }

  // denom_m = N0 + g * others, signal_m = denom_m + own.
  std::vector<std::vector<double>> denom(users, std::vector<double>(n));
  std::vector<std::vector<double>> signal(users, std::vector<double>(n));
  std::vector<double> cross(n, 0.0);  // sum_m T_m / (denom_m * signal_m)
  for (std::size_t m = 0; m < users; ++m) {
    for (std::size_t i = 0; i < n; ++i) {
      const double own = all.strategies[m].powers[i];
      denom[m][i] = spec.profile.noise[i] + spec.g * (aggregate[i] - own);
      signal[m][i] = denom[m][i] + own;
      cross[i] += own / (denom[m][i] * signal[m][i]);
    }
  }

  std::vector<std::vector<double>> grad(users, std::vector<double>(n));
  for (std::size_t j = 0; j < users; ++j) {
    for (std::size_t i = 0; i < n; ++i) {
      const double own = all.strategies[j].powers[i];
      const double others_harm = cross[i] - own / (denom[j][i] * signal[j][i]);
      grad[j][i] = spec.profile.weights[i] * (1.0 / signal[j][i] - spec.g * others_harm);
    }
  }
  return grad;
}

StrategyProfile centralized_solve(const GameSpec& spec, std::size_t starts,
                                  std::uint64_t seed) {
  if (!std::isfinite(spec.g) || spec.g < 0.0 || spec.g >= 1.0) {
    throw CrosstalkOutOfRange("centralized benchmark requires g in [0, 1)");
  }
  if (starts == 0) throw InvalidBudget("at least one start is required");

  const EquilibriumSolution ne = solve_ne(spec);
  StrategyProfile best = ascend(spec, to_canonical_orders(spec, ne.strategies));
  double best_value = sum_rate(spec.profile, spec.g, best);

  for (std::size_t s = 0; s < starts; ++s) {
    std::mt19937_64 rng(seed + 0x9e3779b97f4a7c15ULL * (s + 1));
    StrategyProfile candidate = ascend(spec, random_feasible_profile(spec, rng));
    const double value = sum_rate(spec.profile, spec.g, candidate);
    if (value > best_value) {
      best_value = value;
      best = std::move(candidate);
    }
  }
  return best;
}

std::vector<PoaPoint> poa_sweep(const GameSpec& spec_template,
                                const std::vector<double>& g_grid,
                                std::size_t starts, std::uint64_t seed) {
  for (double g : g_grid) {
    if (!std::isfinite(g) || g < 0.0 || g >= 1.0) {
      throw CrosstalkOutOfRange("sweep grid must lie in [0, 1)");
    }
  }

  std::vector<PoaPoint> points;
  points.reserve(g_grid.size());
  for (std::size_t idx = 0; idx < g_grid.size(); ++idx) {
    GameSpec spec = spec_template;
    spec.g = g_grid[idx];

    const EquilibriumSolution ne = solve_ne(spec);
    const StrategyProfile opt = centralized_solve(spec, starts, seed + idx);

    PoaPoint point;
    point.g = spec.g;
    point.per_user_ne.resize(spec.users());
    point.per_user_opt.resize(spec.users());
    for (std::size_t c = 0; c < spec.users(); ++c) {
      point.per_user_ne[c] = ne.payoffs[spec.user_to_original[c]];
      point.per_user_opt[c] = payoff(spec.profile, spec.g, c, opt);
      point.ne_sum_rate += point.per_user_ne[c];
      point.opt_sum_rate += point.per_user_opt[c];
    }
    point.poa = 1.0 - point.ne_sum_rate / point.opt_sum_rate;
    points.push_back(std::move(point));
  }
  return points;
}

}  // namespace wfg
