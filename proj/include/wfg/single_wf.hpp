#pragma once

#include "wfg/model.hpp"

namespace wfg {

// Solution of the single-user water-filling problem
//   max sum_i pi_i ln(1 + T_i/N0_i)  s.t.  sum_i pi_i T_i = budget, T >= 0.
// Active channels i <= active_count share the common water level
// T_i + N0_i = water_level = 1/multiplier; channels above stay at zero.
struct WaterfillSolution {
  Strategy strategy;          // canonical channel order
  double water_level = 0.0;   // t* = 1/omega*
  double multiplier = 0.0;    // omega*
  std::size_t active_count = 0;
  std::vector<double> phi;    // breakpoints phi_1..phi_n
};

// phi_t = sum_{i<=t} pi_i (N0_t - N0_i). phi_1 = 0, nondecreasing.
// The budget interval (phi_k, phi_{k+1}] (phi_{n+1} = infinity) selects the
// number k of active channels.
std::vector<double> phi_breakpoints(const ChannelProfile& profile);

// Direct finite-step solver:
//   T_i = (budget + sum_{t<=k} pi_t (N0_t - N0_i)) / sum_{t<=k} pi_t  for i <= k,
// with k the largest index such that phi_k < budget. Throws InvalidBudget.
WaterfillSolution waterfill_closed_form(const ChannelProfile& profile, double budget);

// Root-finding solver used as an independent cross-check: bisects
// H(omega) = sum_i pi_i [1/omega - N0_i]_+ until |H(omega) - budget| <= tol.
// Termination is on the residual, not the interval, because H is piecewise
// linear in 1/omega and flat stretches in omega are harmless.
// Throws ToleranceNotReached after 10^6 iterations.
WaterfillSolution waterfill_bisection(const ChannelProfile& profile, double budget,
                                      double tol);

}  // namespace wfg
