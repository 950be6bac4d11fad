#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <random>

#include "test_util.hpp"
#include "wfg/centralized.hpp"
#include "wfg/single_wf.hpp"

using namespace wfg;
namespace tu = testutil;

TEST_CASE("phi breakpoints") {
  SUBCASE("reference five-channel values") {
    const std::vector<double> phi = phi_breakpoints(tu::ex_profile());
    CHECK(tu::max_abs_diff(phi, tu::ex1_phi()) < 1e-5);
    CHECK(phi.front() == 0.0);
    CHECK(std::is_sorted(phi.begin(), phi.end()));
  }
  SUBCASE("single channel") {
    CHECK(phi_breakpoints(canonicalize_profile({1.0}, {3.0})) == std::vector<double>{0.0});
  }
  SUBCASE("uniform noise gives all zeros") {
    const std::vector<double> phi =
        phi_breakpoints(canonicalize_profile({0.3, 0.3, 0.4}, {2.5, 2.5, 2.5}));
    CHECK(tu::max_abs_diff(phi, {0.0, 0.0, 0.0}) == 0.0);
  }
}

TEST_CASE("closed form reproduces the reference allocation") {
  const WaterfillSolution sol = waterfill_closed_form(tu::ex_profile(), 5.0);
  CHECK(sol.active_count == 5);
  CHECK(tu::max_abs_diff(sol.strategy.powers, tu::ex1_strategy()) < 1e-3);
  CHECK(budget_feasible(tu::ex_profile(), sol.strategy, 5.0));
  CHECK(sol.water_level == doctest::Approx(sol.strategy.powers[0] + 1.0));
  StrategyProfile lone{{sol.strategy}};
  CHECK(std::abs(payoff(tu::ex_profile(), 0.0, 0, lone) - 1.11) < 1e-2);
}

TEST_CASE("single channel forces the whole budget") {
  const ChannelProfile p = canonicalize_profile({1.0}, {3.0});
  const WaterfillSolution sol = waterfill_closed_form(p, 2.0);
  CHECK(sol.strategy.powers == std::vector<double>{2.0});
  CHECK(sol.water_level == doctest::Approx(5.0));
  CHECK(sol.multiplier == doctest::Approx(0.2));

  const WaterfillSolution bis = waterfill_bisection(p, 2.0, 1e-12);
  CHECK(bis.multiplier == doctest::Approx(0.2).epsilon(1e-10));
}

TEST_CASE("nonpositive budgets are rejected") {
  CHECK_THROWS_AS(waterfill_closed_form(tu::ex_profile(), 0.0), InvalidBudget);
  CHECK_THROWS_AS(waterfill_closed_form(tu::ex_profile(), -1.0), InvalidBudget);
  CHECK_THROWS_AS(waterfill_bisection(tu::ex_profile(), 1.0, 0.0), InvalidBudget);
}

TEST_CASE("budget exactly on a breakpoint leaves the marginal channel silent") {
  // phi_3 = 0.616 on the reference channels: two active channels, the third
  // gets exactly zero and the smaller count is recorded.
  const WaterfillSolution sol = waterfill_closed_form(tu::ex_profile(), 0.616);
  CHECK(sol.active_count == 2);
  CHECK(sol.strategy.powers[2] == 0.0);
  CHECK(sol.water_level == doctest::Approx(2.89));

  const WaterfillSolution bis = waterfill_bisection(tu::ex_profile(), 0.616, 1e-12);
  CHECK(bis.active_count == 2);
  CHECK(std::abs(bis.strategy.powers[2]) < 1e-9);
}

TEST_CASE("closed form matches the bisection oracle") {
  const WaterfillSolution ref_a = waterfill_closed_form(tu::ex_profile(), 5.0);
  const WaterfillSolution ref_b = waterfill_bisection(tu::ex_profile(), 5.0, 1e-12);
  CHECK(tu::max_abs_diff(ref_a.strategy.powers, ref_b.strategy.powers) < 1e-9);

  std::mt19937_64 rng(5150);
  for (int trial = 0; trial < 60; ++trial) {
    const GameSpec spec = tu::random_spec(rng, 1, 12, 0.0);
    const WaterfillSolution a = waterfill_closed_form(spec.profile, spec.budgets[0]);
    const WaterfillSolution b = waterfill_bisection(spec.profile, spec.budgets[0], 1e-12);
    CHECK(tu::max_abs_diff(a.strategy.powers, b.strategy.powers) < 1e-9);
    CHECK(std::abs(a.water_level - b.water_level) < 1e-9 * a.water_level);
  }
}

TEST_CASE("equal water level and first-order optimality") {
  std::mt19937_64 rng(99);
  for (int trial = 0; trial < 40; ++trial) {
    const GameSpec spec = tu::random_spec(rng, 1, 10, 0.0);
    const WaterfillSolution sol = waterfill_closed_form(spec.profile, spec.budgets[0]);
    for (std::size_t i = 0; i < spec.channels(); ++i) {
      const double noise = spec.profile.noise[i];
      if (i < sol.active_count) {
        CHECK(std::abs(sol.strategy.powers[i] + noise - sol.water_level) <=
              1e-9 * sol.water_level);
        CHECK(std::abs(1.0 / (sol.strategy.powers[i] + noise) - sol.multiplier) <=
              1e-9 * sol.multiplier);
      } else {
        CHECK(sol.strategy.powers[i] == 0.0);
        CHECK(noise >= sol.water_level - 1e-9);
        CHECK(1.0 / noise <= sol.multiplier + 1e-9);
      }
    }
  }
}

TEST_CASE("water level and every allocation grow with the budget") {
  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 30; ++trial) {
    const GameSpec spec = tu::random_spec(rng, 1, 10, 0.0);
    const double small = spec.budgets[0];
    const double large = small * (1.0 + tu::log_uniform(rng, 0.01, 3.0));
    const WaterfillSolution a = waterfill_closed_form(spec.profile, small);
    const WaterfillSolution b = waterfill_closed_form(spec.profile, large);
    CHECK(b.water_level >= a.water_level);
    for (std::size_t i = 0; i < spec.channels(); ++i) {
      CHECK(b.strategy.powers[i] >= a.strategy.powers[i] - 1e-12);
    }
  }
}

TEST_CASE("closed form dominates random feasible strategies") {
  std::mt19937_64 rng(31337);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int trial = 0; trial < 10; ++trial) {
    const GameSpec spec = tu::random_spec(rng, 1, 8, 0.0);
    const WaterfillSolution sol = waterfill_closed_form(spec.profile, spec.budgets[0]);
    StrategyProfile best{{sol.strategy}};
    const double optimum = payoff(spec.profile, 0.0, 0, best);
    for (int sample = 0; sample < 100; ++sample) {
      std::vector<double> raw(spec.channels());
      for (double& x : raw) x = u(rng) * 3.0 * spec.budgets[0];
      StrategyProfile candidate{{Strategy{project_weighted_simplex(
          raw, spec.profile.weights, spec.budgets[0])}}};
      CHECK(payoff(spec.profile, 0.0, 0, candidate) <= optimum + 1e-12);
    }
  }
}
