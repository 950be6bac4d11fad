#include "wfg/game_ne.hpp"

#include <algorithm>
#include <cmath>

#include "wfg/single_wf.hpp"

namespace wfg {

namespace {

void require_g_half_open(double g) {
  if (!std::isfinite(g) || g < 0.0 || g >= 1.0) {
    throw CrosstalkOutOfRange("operation requires crosstalk g in [0, 1)");
  }
}

void require_g_open(double g) {
  if (!std::isfinite(g) || g <= 0.0 || g >= 1.0) {
    throw CrosstalkOutOfRange("closed form requires crosstalk g in (0, 1)");
  }
}

bool sorted_nonincreasing(std::span<const double> v) {
  for (std::size_t i = 0; i + 1 < v.size(); ++i) {
    const double slack = 1e-12 * std::max({std::abs(v[i]), std::abs(v[i + 1]), 1.0});
    if (v[i + 1] > v[i] + slack) return false;
  }
  return true;
}

bool sorted_nondecreasing(std::span<const double> v) {
  for (std::size_t i = 0; i + 1 < v.size(); ++i) {
    const double slack = 1e-12 * std::max({std::abs(v[i]), std::abs(v[i + 1]), 1.0});
    if (v[i + 1] < v[i] - slack) return false;
  }
  return true;
}

// tau over an assembled tail u = (t^k, t^{k+1}, ..., t^L); ranks are
// one-based, u[r - k] holds t^r.
double tau_from_tail(std::span<const double> u, std::size_t k, std::size_t m, double g) {
  double acc = 0.0;
  for (std::size_t r = k; r < m; ++r) {
    acc += (u[r - k] - u[r - k + 1]) / (1.0 + static_cast<double>(r - 1) * g);
  }
  const double coeff = 1.0 + static_cast<double>(m - 1) * g;
  return coeff * acc + u[m - k];
}

std::vector<double> canonical_payoffs(const GameSpec& spec, const StrategyProfile& canonical) {
  std::vector<double> v(spec.users());
  for (std::size_t j = 0; j < spec.users(); ++j) {
    v[j] = payoff(spec.profile, spec.g, j, canonical);
  }
  return v;
}

std::size_t support_count(const ChannelProfile& profile, double threshold) {
  std::size_t k = 0;
  while (k < profile.size() && profile.noise[k] < threshold) ++k;
  return k;
}

EquilibriumSolution assemble_solution(const GameSpec& spec, ThresholdSet thresholds,
                                      const StrategyProfile& canonical_strategies,
                                      std::vector<std::size_t> breakpoints) {
  EquilibriumSolution sol;
  sol.multipliers = multipliers_from_thresholds(thresholds, spec.g);
  sol.thresholds = std::move(thresholds);
  sol.breakpoints = std::move(breakpoints);

  const std::vector<double> v = canonical_payoffs(spec, canonical_strategies);
  sol.payoffs.resize(spec.users());
  for (std::size_t c = 0; c < spec.users(); ++c) {
    sol.payoffs[spec.user_to_original[c]] = v[c];
  }
  sol.strategies = to_original_orders(spec, canonical_strategies);
  sol.user_to_original = spec.user_to_original;
  sol.channel_to_original = spec.profile.to_original;
  return sol;
}

}  // namespace

ThresholdSet thresholds_from_multipliers(const MultiplierSet& omega, double g) {
  require_g_half_open(g);
  const std::size_t levels = omega.size();
  if (levels == 0) throw DimensionMismatch("multiplier set must be nonempty");
  for (double w : omega.omega) {
    if (!std::isfinite(w) || w <= 0.0) {
      throw NonPositiveValue("multipliers must be positive");
    }
  }
  if (!sorted_nondecreasing(omega.omega)) {
    throw UnsortedMultipliers("multipliers must be nondecreasing");
  }

  // t^1 = 1/omega^1, then
  // t^{r+1} = t^r + (1+(r-1)g)/(1-g) * (1/omega^{r+1} - 1/omega^r),
  // the exact step inverse of the multiplier recurrence.
  ThresholdSet out;
  out.t.resize(levels);
  out.t[0] = 1.0 / omega.omega[0];
  for (std::size_t r = 1; r < levels; ++r) {
    const double diff = 1.0 / omega.omega[r] - 1.0 / omega.omega[r - 1];
    out.t[r] = out.t[r - 1] +
               diff * (1.0 + static_cast<double>(r - 1) * g) / (1.0 - g);
  }
  return out;
}

MultiplierSet multipliers_from_thresholds(const ThresholdSet& t, double g) {
  require_g_half_open(g);
  const std::size_t levels = t.size();
  if (levels == 0) throw DimensionMismatch("threshold set must be nonempty");
  if (!sorted_nonincreasing(t.t)) {
    throw UnsortedThresholds("thresholds must be nonincreasing");
  }

  MultiplierSet out;
  out.omega.resize(levels);
  double reciprocal = t.t[0];  // 1/omega^1 = t^1
  if (reciprocal <= 0.0) {
    throw NonPositiveReciprocal("threshold vector implies a nonpositive water level");
  }
  out.omega[0] = 1.0 / reciprocal;
  for (std::size_t r = 1; r < levels; ++r) {
    reciprocal += (1.0 - g) * (t.t[r] - t.t[r - 1]) / (1.0 + static_cast<double>(r - 1) * g);
    if (reciprocal <= 0.0) {
      throw NonPositiveReciprocal("threshold vector implies a nonpositive water level");
    }
    out.omega[r] = 1.0 / reciprocal;
  }
  return out;
}

double tau(std::size_t k, std::size_t m, const ThresholdSet& t, double g) {
  require_g_half_open(g);
  if (k < 1 || m < k || m > t.size()) {
    throw IndexOutOfRange("tau requires 1 <= k <= m <= L");
  }
  return tau_from_tail(std::span<const double>(t.t).subspan(k - 1), k, m, g);
}

StrategyProfile strategy_from_thresholds(const GameSpec& spec, const ThresholdSet& t) {
  require_g_half_open(spec.g);
  const std::size_t users = spec.users();
  const std::size_t n = spec.channels();
  if (t.size() != users) {
    throw DimensionMismatch("threshold count does not match user count");
  }
  if (!sorted_nonincreasing(t.t)) {
    throw UnsortedThresholds("thresholds must be nonincreasing");
  }

  StrategyProfile out;
  out.strategies.resize(users);
  for (Strategy& s : out.strategies) s.powers.assign(n, 0.0);

  const double g = spec.g;
  const double scale = std::max(1.0, std::abs(t.t.front()));
  for (std::size_t i = 0; i < n; ++i) {
    const double noise = spec.profile.noise[i];
    // Band of channel i: number of users whose cutoff lies above its noise.
    std::size_t m = 0;
    while (m < users && t.t[m] > noise) ++m;
    if (m == 0) continue;

    const double denom = 1.0 + static_cast<double>(m - 1) * g;
    for (std::size_t k = 1; k <= m; ++k) {
      double power = (tau(k, m, t, g) - noise) / denom;
      if (power < 0.0) {
        if (power < -1e-9 * scale) {
          throw NegativePower("thresholds do not describe a feasible allocation");
        }
        power = 0.0;
      }
      out.strategies[k - 1].powers[i] = power;
    }
  }
  return out;
}

double htilde(const GameSpec& spec, std::size_t k, double t_k,
              std::span<const double> fixed_below) {
  require_g_half_open(spec.g);
  const std::size_t users = spec.users();
  if (k < 1 || k > users) throw IndexOutOfRange("user rank out of range");
  if (fixed_below.size() != users - k) {
    throw DimensionMismatch("fixed thresholds must cover ranks k+1..L");
  }
  if (!sorted_nonincreasing(fixed_below)) {
    throw UnsortedThresholds("fixed thresholds must be nonincreasing");
  }
  if (!fixed_below.empty()) {
    const double top = fixed_below.front();
    if (t_k < top - 1e-12 * std::max(std::abs(top), 1.0)) {
      throw UnsortedThresholds("candidate threshold must not undercut rank k+1");
    }
  }

  const double g = spec.g;
  std::vector<double> tail(fixed_below.size() + 1);
  tail[0] = std::max(t_k, fixed_below.empty() ? t_k : fixed_below.front());
  std::copy(fixed_below.begin(), fixed_below.end(), tail.begin() + 1);

  double total = 0.0;
  for (std::size_t i = 0; i < spec.channels(); ++i) {
    const double noise = spec.profile.noise[i];
    if (noise >= t_k) continue;
    std::size_t deeper = 0;  // weaker users also active on this channel
    while (deeper < fixed_below.size() && fixed_below[deeper] > noise) ++deeper;
    const std::size_t m = k + deeper;
    const double denom = 1.0 + static_cast<double>(m - 1) * g;
    const double power = (tau_from_tail(tail, k, m, g) - noise) / denom;
    if (power > 0.0) total += spec.profile.weights[i] * power;
  }
  return total;
}

ThresholdSet solve_triangular(const GameSpec& spec) {
  require_g_half_open(spec.g);
  const std::size_t users = spec.users();
  const std::size_t n = spec.channels();
  const double g = spec.g;
  const auto& noise = spec.profile.noise;
  const auto& weights = spec.profile.weights;

  // Weight of the channels active strictly below a cut x.
  const auto active_weight = [&](double x) {
    double acc = 0.0;
    for (std::size_t i = 0; i < n && noise[i] <= x; ++i) acc += weights[i];
    return acc;
  };

  std::vector<double> solved;  // t^{k+1}..t^L while solving rank k
  for (std::size_t k = users; k >= 1; --k) {
    const double budget = spec.budgets[k - 1];
    const std::span<const double> tail(solved);
    const double lo = solved.empty() ? 0.0 : solved.front();
    const double h_lo = htilde(spec, k, lo, tail);

    double t_k;
    if (h_lo >= budget) {
      // Tie with the next weaker user's cutoff (equal budgets).
      t_k = lo;
    } else {
      const double rank_denom = 1.0 + static_cast<double>(k - 1) * g;
      double prev_x = lo;
      double prev_h = h_lo;
      bool found = false;
      for (std::size_t i = 0; i < n; ++i) {
        const double x = noise[i];
        if (x <= prev_x) continue;  // inside the active set or duplicate
        const double h = htilde(spec, k, x, tail);
        if (budget <= h) {
          const double slope = active_weight(prev_x) / rank_denom;
          t_k = prev_x + (budget - prev_h) / slope;
          t_k = std::clamp(t_k, prev_x, x);
          found = true;
          break;
        }
        prev_x = x;
        prev_h = h;
      }
      if (!found) {
        const double slope = active_weight(noise.back()) / rank_denom;
        t_k = prev_x + (budget - prev_h) / slope;
      }
    }
    solved.insert(solved.begin(), t_k);
  }

  ThresholdSet out;
  out.t = std::move(solved);
  return out;
}

EquilibriumSolution solve_ne(const GameSpec& spec) {
  require_g_half_open(spec.g);
  ThresholdSet thresholds = solve_triangular(spec);
  StrategyProfile canonical = strategy_from_thresholds(spec, thresholds);

  std::vector<std::size_t> breakpoints(spec.users());
  for (std::size_t k = 0; k < spec.users(); ++k) {
    breakpoints[k] = support_count(spec.profile, thresholds.t[k]);
  }
  return assemble_solution(spec, std::move(thresholds), canonical, std::move(breakpoints));
}

EquilibriumSolution two_player_closed_form(const GameSpec& spec) {
  if (spec.users() != 2) throw WrongUserCount("two-user closed form requires L = 2");
  require_g_open(spec.g);
  if (!(spec.budgets[0] > spec.budgets[1])) {
    throw NonStrictBudgets("two-user closed form requires strictly ordered budgets");
  }

  const std::size_t n = spec.channels();
  const double g = spec.g;
  const auto& noise = spec.profile.noise;
  const auto& w = spec.profile.weights;
  const double budget1 = spec.budgets[0];
  const double budget2 = spec.budgets[1];

  const auto prefix_weight = [&](std::size_t count) {
    double acc = 0.0;
    for (std::size_t i = 0; i < count; ++i) acc += w[i];
    return acc;
  };
  const auto prefix_weighted_noise = [&](std::size_t count) {
    double acc = 0.0;
    for (std::size_t i = 0; i < count; ++i) acc += w[i] * noise[i];
    return acc;
  };

  // (a) weaker user: scaled single-user breakpoints.
  const std::vector<double> phi_single = phi_breakpoints(spec.profile);
  std::size_t k2 = 1;
  while (k2 < n && phi_single[k2] / (1.0 + g) < budget2) ++k2;
  const double t2 =
      ((1.0 + g) * budget2 + prefix_weighted_noise(k2)) / prefix_weight(k2);

  // (b) stronger user: breakpoints account for the weaker user's presence on
  // the first k2 channels.
  const auto phi1 = [&](std::size_t k) {  // k in [k2+1, n]
    double acc = 0.0;
    for (std::size_t i = k2; i < k; ++i) acc += w[i] * (noise[k - 1] - noise[i]);
    for (std::size_t i = 0; i < k2; ++i) {
      acc += w[i] * ((1.0 + g) * noise[k - 1] - noise[i] - g * t2) / (1.0 + g);
    }
    return acc;
  };
  std::size_t k1 = k2;
  while (k1 < n && phi1(k1 + 1) < budget1) ++k1;

  double t1_num = budget1;
  for (std::size_t i = k2; i < k1; ++i) t1_num += w[i] * noise[i];
  for (std::size_t i = 0; i < k2; ++i) t1_num += w[i] * (g * t2 + noise[i]) / (1.0 + g);
  const double t1 = t1_num / prefix_weight(k1);

  StrategyProfile canonical;
  canonical.strategies.assign(2, Strategy{std::vector<double>(n, 0.0)});
  for (std::size_t i = 0; i < k2; ++i) {
    canonical.strategies[0].powers[i] = t1 - (g * t2 + noise[i]) / (1.0 + g);
    canonical.strategies[1].powers[i] = (t2 - noise[i]) / (1.0 + g);
  }
  for (std::size_t i = k2; i < k1; ++i) {
    canonical.strategies[0].powers[i] = t1 - noise[i];
  }

  ThresholdSet thresholds;
  thresholds.t = {t1, t2};
  return assemble_solution(spec, std::move(thresholds), canonical, {k1, k2});
}

EquilibriumSolution three_player_closed_form(const GameSpec& spec) {
  if (spec.users() != 3) throw WrongUserCount("three-user closed form requires L = 3");
  require_g_open(spec.g);
  if (!(spec.budgets[0] > spec.budgets[1] && spec.budgets[1] > spec.budgets[2])) {
    throw NonStrictBudgets("three-user closed form requires strictly ordered budgets");
  }

  const std::size_t n = spec.channels();
  const double g = spec.g;
  const auto& noise = spec.profile.noise;
  const auto& w = spec.profile.weights;
  const double budget1 = spec.budgets[0];
  const double budget2 = spec.budgets[1];
  const double budget3 = spec.budgets[2];
  const double one_g = 1.0 + g;
  const double one_2g = 1.0 + 2.0 * g;

  const auto prefix_weight = [&](std::size_t count) {
    double acc = 0.0;
    for (std::size_t i = 0; i < count; ++i) acc += w[i];
    return acc;
  };

  // (a) weakest user.
  const std::vector<double> phi_single = phi_breakpoints(spec.profile);
  std::size_t k3 = 1;
  while (k3 < n && phi_single[k3] / one_2g < budget3) ++k3;
  double acc = 0.0;
  for (std::size_t i = 0; i < k3; ++i) acc += w[i] * noise[i];
  const double t3 = (one_2g * budget3 + acc) / prefix_weight(k3);

  // (b) middle user.
  const auto phi2 = [&](std::size_t k) {  // k in [k3+1, n]
    double sum = 0.0;
    for (std::size_t i = k3; i < k; ++i) sum += w[i] * (noise[k - 1] - noise[i]) / one_g;
    for (std::size_t i = 0; i < k3; ++i) {
      sum += w[i] * (noise[k - 1] / one_g - (noise[i] + g * t3 / one_g) / one_2g);
    }
    return sum;
  };
  std::size_t k2 = k3;
  while (k2 < n && phi2(k2 + 1) < budget2) ++k2;

  double t2_num = budget2;
  for (std::size_t i = k3; i < k2; ++i) t2_num += w[i] * noise[i] / one_g;
  for (std::size_t i = 0; i < k3; ++i) t2_num += w[i] * (g * t3 / one_g + noise[i]) / one_2g;
  const double t2 = t2_num / (prefix_weight(k2) / one_g);

  // (c) strongest user.
  const auto phi1 = [&](std::size_t k) {  // k in [k2+1, n]
    double sum = 0.0;
    for (std::size_t i = k2; i < k; ++i) sum += w[i] * (noise[k - 1] - noise[i]);
    for (std::size_t i = k3; i < k2; ++i) {
      sum += w[i] * (noise[k - 1] - (g * t2 + noise[i]) / one_g);
    }
    for (std::size_t i = 0; i < k3; ++i) {
      sum += w[i] * (noise[k - 1] - g * t2 / one_g - (g * t3 / one_g + noise[i]) / one_2g);
    }
    return sum;
  };
  std::size_t k1 = k2;
  while (k1 < n && phi1(k1 + 1) < budget1) ++k1;

  double t1_num = budget1;
  for (std::size_t i = k2; i < k1; ++i) t1_num += w[i] * noise[i];
  for (std::size_t i = k3; i < k2; ++i) t1_num += w[i] * (g * t2 + noise[i]) / one_g;
  for (std::size_t i = 0; i < k3; ++i) {
    t1_num += w[i] * (g * t2 / one_g + (g * t3 / one_g + noise[i]) / one_2g);
  }
  const double t1 = t1_num / prefix_weight(k1);

  StrategyProfile canonical;
  canonical.strategies.assign(3, Strategy{std::vector<double>(n, 0.0)});
  for (std::size_t i = 0; i < k3; ++i) {
    canonical.strategies[0].powers[i] =
        t1 - g * t2 / one_g - (g * t3 / one_g + noise[i]) / one_2g;
    canonical.strategies[1].powers[i] = t2 / one_g - (g * t3 / one_g + noise[i]) / one_2g;
    canonical.strategies[2].powers[i] = (t3 - noise[i]) / one_2g;
  }
  for (std::size_t i = k3; i < k2; ++i) {
    canonical.strategies[0].powers[i] = t1 - (g * t2 + noise[i]) / one_g;
    canonical.strategies[1].powers[i] = (t2 - noise[i]) / one_g;
  }
  for (std::size_t i = k2; i < k1; ++i) {
    canonical.strategies[0].powers[i] = t1 - noise[i];
  }

  ThresholdSet thresholds;
  thresholds.t = {t1, t2, t3};
  return assemble_solution(spec, std::move(thresholds), canonical, {k1, k2, k3});
}

}  // namespace wfg
