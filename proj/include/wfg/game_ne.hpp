#pragma once

#include <span>

#include "wfg/model.hpp"

namespace wfg {

// Noise cutoffs t^1 >= t^2 >= ... >= t^L, one per user in canonical
// (nonincreasing-budget) order. User k transmits exactly on channels with
// N0_i < t^k, so supports are nested: the weaker the user, the fewer
// channels it occupies.
struct ThresholdSet {
  std::vector<double> t;

  std::size_t size() const { return t.size(); }
};

// Lagrange multipliers omega^1 <= ... <= omega^L, canonical user order.
// 1/omega^k is user k's water level (signal + interference + noise on its
// active channels).
struct MultiplierSet {
  std::vector<double> omega;

  std::size_t size() const { return omega.size(); }
};

// Equilibrium of the symmetric water-filling game. Strategies and payoffs
// are mapped back to the caller's original user/channel order; thresholds,
// multipliers and breakpoints keep the canonical (sorted) order their
// invariants are stated in. The permutations are carried along so either
// view can be reconstructed.
struct EquilibriumSolution {
  StrategyProfile strategies;            // original user/channel order
  ThresholdSet thresholds;               // canonical user order
  MultiplierSet multipliers;             // canonical user order
  std::vector<std::size_t> breakpoints;  // k^1..k^L, canonical user order
  std::vector<double> payoffs;           // nats, original user order
  std::vector<std::size_t> user_to_original;
  std::vector<std::size_t> channel_to_original;
};

// t^r = (1/(1-g)) ((1+(r-1)g)/omega^r - g sum_{j<=r} 1/omega^j).
// Requires omega nondecreasing (UnsortedMultipliers) and g in [0,1).
ThresholdSet thresholds_from_multipliers(const MultiplierSet& omega, double g);

// Inverse of the above: 1/omega^1 = t^1 and
// 1/omega^{r+1} = 1/omega^r + (1-g)(t^{r+1} - t^r)/(1+(r-1)g).
// Requires t nonincreasing (UnsortedThresholds); a nonpositive reciprocal
// signals an infeasible threshold vector (NonPositiveReciprocal).
MultiplierSet multipliers_from_thresholds(const ThresholdSet& t, double g);

// Common water quantity of user rank k on a channel shared by the m
// strongest users (1 <= k <= m <= L, both one-based):
//   tau(k,m) = (1+(m-1)g) sum_{j=k}^{m-1} (t^j - t^{j+1})/(1+(j-1)g) + t^m.
// tau(k,k) = t^k. Throws IndexOutOfRange.
double tau(std::size_t k, std::size_t m, const ThresholdSet& t, double g);

// The threshold-to-strategy map. Channel i with t^{m+1} <= N0_i < t^m
// (t^{L+1} = 0, t^0 = infinity) hosts users 1..m; user k <= m receives
//   T^k_i = (tau(k,m) - N0_i) / (1+(m-1)g),
// users k > m receive zero. Result is in canonical user/channel order.
// Requires t nonincreasing and g in [0,1).
StrategyProfile strategy_from_thresholds(const GameSpec& spec, const ThresholdSet& t);

// Weighted power sum_i pi_i T^k_i of user rank k (one-based) as a function
// of its own candidate threshold t_k, with the weaker users' thresholds
// t^{k+1}..t^L already fixed (fixed_below, nonincreasing). Piecewise linear,
// continuous and nondecreasing in t_k; strictly increasing once some channel
// is active. Users 1..k-1 never enter: they are active wherever user k is,
// so only their count matters.
double htilde(const GameSpec& spec, std::size_t k, double t_k,
              std::span<const double> fixed_below);

// Solves the triangular system htilde(k, t^k; t^{k+1}..t^L) = budget^k
// sequentially from k = L down to 1. Each step is finite: htilde is
// piecewise linear in t^k with breakpoints at the noise values, so the
// matching segment is located by a scan and the equation solved exactly.
// Requires g in [0,1) (CrosstalkOutOfRange); never fails for valid specs.
ThresholdSet solve_triangular(const GameSpec& spec);

// The unique Nash equilibrium for g in [0,1): thresholds via
// solve_triangular, strategies via strategy_from_thresholds, multipliers,
// breakpoints and payoffs assembled and mapped back to original order.
// g = 0 decouples into independent single-user water-fills; g = 1 has a
// continuum of equilibria and is rejected here (CrosstalkOutOfRange).
EquilibriumSolution solve_ne(const GameSpec& spec);

// Direct transcription of the two-user closed form (strictly ordered
// budgets, g in (0,1)). Independent code path used to cross-check solve_ne.
// Throws WrongUserCount / NonStrictBudgets / CrosstalkOutOfRange.
EquilibriumSolution two_player_closed_form(const GameSpec& spec);

// Direct transcription of the three-user closed form, same contract.
EquilibriumSolution three_player_closed_form(const GameSpec& spec);

}  // namespace wfg
