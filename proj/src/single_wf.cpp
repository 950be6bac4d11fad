#include "wfg/single_wf.hpp"

#include <algorithm>
#include <cmath>

namespace wfg {

namespace {

constexpr std::size_t kBisectionCap = 1000000;

double h_of_omega(const ChannelProfile& profile, double omega) {
  const double level = 1.0 / omega;
  double total = 0.0;
  for (std::size_t i = 0; i < profile.size(); ++i) {
    total += profile.weights[i] * std::max(0.0, level - profile.noise[i]);
  }
  return total;
}

}  // namespace

std::vector<double> phi_breakpoints(const ChannelProfile& profile) {
  const std::size_t n = profile.size();
  std::vector<double> phi(n, 0.0);
  double weight_sum = 0.0;
  double weighted_noise_sum = 0.0;
  for (std::size_t t = 0; t < n; ++t) {
    weight_sum += profile.weights[t];
    weighted_noise_sum += profile.weights[t] * profile.noise[t];
    phi[t] = weight_sum * profile.noise[t] - weighted_noise_sum;
  }
  return phi;
}

WaterfillSolution waterfill_closed_form(const ChannelProfile& profile, double budget) {
  if (!std::isfinite(budget) || budget <= 0.0) {
    throw InvalidBudget("water-filling budget must be positive");
  }
  const std::size_t n = profile.size();
  WaterfillSolution sol;
  sol.phi = phi_breakpoints(profile);

  // Largest k with phi_k < budget (phi_{n+1} treated as unbounded).
  std::size_t k = 1;
  while (k < n && sol.phi[k] < budget) ++k;

  double weight_sum = 0.0;
  double weighted_noise_sum = 0.0;
  for (std::size_t i = 0; i < k; ++i) {
    weight_sum += profile.weights[i];
    weighted_noise_sum += profile.weights[i] * profile.noise[i];
  }
  const double level = (budget + weighted_noise_sum) / weight_sum;

  sol.strategy.powers.assign(n, 0.0);
  for (std::size_t i = 0; i < k; ++i) {
    sol.strategy.powers[i] = level - profile.noise[i];
  }
  sol.water_level = level;
  sol.multiplier = 1.0 / level;
  sol.active_count = k;
  return sol;
}

WaterfillSolution waterfill_bisection(const ChannelProfile& profile, double budget,
                                      double tol) {
  if (!std::isfinite(budget) || budget <= 0.0) {
    throw InvalidBudget("water-filling budget must be positive");
  }
  if (!(tol > 0.0)) throw InvalidBudget("bisection tolerance must be positive");

  // H(1/N0_1) = 0; halve downward until the budget is bracketed.
  double omega_hi = 1.0 / profile.noise.front();
  double omega_lo = omega_hi;
  std::size_t spent = 0;
  while (h_of_omega(profile, omega_lo) <= budget) {
    omega_lo *= 0.5;
    if (++spent > kBisectionCap) {
      throw ToleranceNotReached("failed to bracket the water level");
    }
  }

  double omega = omega_lo;
  double residual = h_of_omega(profile, omega) - budget;
  while (std::abs(residual) > tol) {
    if (++spent > kBisectionCap) {
      throw ToleranceNotReached("bisection iteration cap exceeded");
    }
    const double mid = 0.5 * (omega_lo + omega_hi);
    const double h_mid = h_of_omega(profile, mid);
    if (h_mid > budget) {
      omega_lo = mid;
    } else {
      omega_hi = mid;
    }
    omega = mid;
    residual = h_mid - budget;
  }

  WaterfillSolution sol;
  sol.phi = phi_breakpoints(profile);
  sol.water_level = 1.0 / omega;
  sol.multiplier = omega;
  sol.strategy.powers.assign(profile.size(), 0.0);
  const double active_eps = 1e-12 * std::max(1.0, sol.water_level);
  std::size_t k = 0;
  for (std::size_t i = 0; i < profile.size(); ++i) {
    const double p = sol.water_level - profile.noise[i];
    if (p > active_eps) {
      sol.strategy.powers[i] = p;
      k = i + 1;
    }
  }
  sol.active_count = k;
  return sol;
}

}  // namespace wfg
