#include "wfg/verify.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "wfg/iwfa.hpp"
#include "wfg/single_wf.hpp"

namespace wfg {

namespace {

double median(std::vector<double> values) {
  const std::size_t n = values.size();
  std::sort(values.begin(), values.end());
  if (n % 2 == 1) return values[n / 2];
  return 0.5 * (values[n / 2 - 1] + values[n / 2]);
}

void check_shape(const GameSpec& spec, const StrategyProfile& all) {
  if (all.users() != spec.users()) {
    throw DimensionMismatch("profile user count does not match spec");
  }
  for (const Strategy& s : all.strategies) {
    if (s.powers.size() != spec.channels()) {
      throw DimensionMismatch("strategy length does not match channel count");
    }
  }
}

}  // namespace

KktReport kkt_check(const GameSpec& spec, const StrategyProfile& all, double threshold) {
  check_shape(spec, all);
  if (!std::isfinite(spec.g) || spec.g < 0.0 || spec.g > 1.0) {
    throw CrosstalkOutOfRange("first-order check requires g in [0, 1]");
  }
  for (std::size_t j = 0; j < spec.users(); ++j) {
    for (double p : all.strategies[j].powers) {
      if (!std::isfinite(p) || p < 0.0) {
        throw InfeasibleProfile("strategies must be nonnegative and finite");
      }
    }
    if (!budget_feasible(spec.profile, all.strategies[j], spec.budgets[j])) {
      throw InfeasibleProfile("strategy does not meet its power budget");
    }
  }

  const std::size_t n = spec.channels();
  std::vector<double> aggregate(n, 0.0);
  for (const Strategy& s : all.strategies) {
    for (std::size_t i = 0; i < n; ++i) aggregate[i] += s.powers[i];
  }

  KktReport report;
  report.residuals.assign(spec.users(), std::vector<double>(n, 0.0));
  report.implied_multipliers.assign(spec.users(), 0.0);
  for (std::size_t j = 0; j < spec.users(); ++j) {
    const double active_eps = 1e-12 * spec.budgets[j];
    std::vector<double> marginal(n), active_values;
    for (std::size_t i = 0; i < n; ++i) {
      const double own = all.strategies[j].powers[i];
      const double interference =
          spec.profile.noise[i] + spec.g * (aggregate[i] - own);
      marginal[i] = 1.0 / (own + interference);
      if (own > active_eps) active_values.push_back(marginal[i]);
    }
    if (active_values.empty()) {
      throw InfeasibleProfile("user transmits no measurable power");
    }
    const double omega_hat = median(std::move(active_values));
    report.implied_multipliers[j] = omega_hat;
    for (std::size_t i = 0; i < n; ++i) {
      const bool active = all.strategies[j].powers[i] > active_eps;
      const double r =
          active ? std::abs(marginal[i] - omega_hat) : std::max(0.0, marginal[i] - omega_hat);
      report.residuals[j][i] = r;
      report.max_residual = std::max(report.max_residual, r);
    }
  }
  report.satisfied = report.max_residual <= threshold;
  return report;
}

std::vector<double> best_response_gap(const GameSpec& spec, const StrategyProfile& all) {
  check_shape(spec, all);
  std::vector<double> gaps(spec.users(), 0.0);
  StrategyProfile work = all;
  for (std::size_t j = 0; j < spec.users(); ++j) {
    const double current = payoff(spec.profile, spec.g, j, all);
    Strategy saved = std::move(work.strategies[j]);
    work.strategies[j] = best_response(spec, j, all);
    gaps[j] = payoff(spec.profile, spec.g, j, work) - current;
    work.strategies[j] = std::move(saved);
  }
  return gaps;
}

std::vector<StrategyProfile> continuum_g1(const GameSpec& spec, std::size_t count,
                                          std::uint64_t seed) {
  if (spec.g != 1.0) throw CrosstalkNotOne("continuum construction requires g = 1");
  if (spec.users() < 2) throw WrongUserCount("continuum construction requires L >= 2");
  if (count == 0) return {};

  double total = 0.0;
  for (double b : spec.budgets) total += b;

  // Shared per-channel aggregate: one water-fill of the pooled budget.
  const WaterfillSolution pooled = waterfill_closed_form(spec.profile, total);
  const std::vector<double>& aggregate = pooled.strategy.powers;

  StrategyProfile base;
  base.strategies.resize(spec.users());
  for (std::size_t j = 0; j < spec.users(); ++j) {
    const double share = spec.budgets[j] / total;
    base.strategies[j].powers.resize(spec.channels());
    for (std::size_t i = 0; i < spec.channels(); ++i) {
      base.strategies[j].powers[i] = share * aggregate[i];
    }
  }
  if (count == 1) return {base};

  if (pooled.active_count < 2) {
    throw InfeasibleSplit("distinct splits need at least two active channels");
  }

  // Shift mass between users 0/1 on the two best channels; both users' spend
  // and both channels' aggregates are preserved, so the first-order
  // certificate is untouched.
  const std::size_t p = 0, q = 1;
  const double ratio = spec.profile.weights[p] / spec.profile.weights[q];
  const double eps_max = 0.95 * std::min(base.strategies[1].powers[p],
                                         base.strategies[0].powers[q] / ratio);
  if (!(eps_max > 0.0)) {
    throw InfeasibleSplit("proportional split leaves no room for shift moves");
  }

  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> jitter(-0.25, 0.25);
  std::vector<StrategyProfile> out;
  out.reserve(count);
  out.push_back(base);
  for (std::size_t idx = 1; idx < count; ++idx) {
    const double eps =
        (static_cast<double>(idx) + jitter(rng)) * eps_max / static_cast<double>(count);
    StrategyProfile shifted = base;
    shifted.strategies[0].powers[p] += eps;
    shifted.strategies[0].powers[q] -= eps * ratio;
    shifted.strategies[1].powers[p] -= eps;
    shifted.strategies[1].powers[q] += eps * ratio;
    out.push_back(std::move(shifted));
  }
  return out;
}

}  // namespace wfg
