#pragma once

#include <cstdint>
#include <optional>
#include <utility>

#include "wfg/game_ne.hpp"
#include "wfg/model.hpp"

namespace wfg {

// Diagnostics of one iterative water-filling run. multiplier_history holds
// each user's implied multiplier (reciprocal water level of its latest
// response) per round; the path converges to the equilibrium multipliers,
// though a weak user's entries can rise toward the limit while the strong
// users retreat from its channels.
struct IwfaTrace {
  std::size_t iterations = 0;                           // completed full rounds
  std::vector<double> strategy_deltas;                  // max-norm change per round
  std::vector<std::vector<double>> multiplier_history;  // implied omega per round
  bool converged = false;
  StrategyProfile final_profile;                        // canonical orders
  std::vector<StrategyProfile> profile_history;         // per round, if recorded
};

struct IwfaOptions {
  double tol = 1e-8;
  std::size_t max_rounds = 100000;
  // All-zero start matches omega^k_0 = 1/N0_1; other warm starts are
  // accepted but are not covered by the monotone-convergence argument.
  std::optional<StrategyProfile> warm_start;
  bool record_profiles = false;  // keep the end-of-round iterates in the trace
};

// Water-filling best response of `user` (zero-based, canonical order) to the
// other rows of `all`: waterfill_closed_form on effective_noise with the
// user's own budget. The interference-bearing noise need not be monotone
// mid-run, so it is re-canonicalized internally.
Strategy best_response(const GameSpec& spec, std::size_t user, const StrategyProfile& all);

// Round-robin best responses in canonical user order starting from all-zero
// strategies (Gauss-Seidel: each response sees the responses already made
// this round). Stops when the max-norm strategy change over a full round is
// <= tol; hitting max_rounds is reported via converged = false, not thrown.
std::pair<EquilibriumSolution, IwfaTrace> iwfa_solve(const GameSpec& spec,
                                                     const IwfaOptions& options = {});

}  // namespace wfg
