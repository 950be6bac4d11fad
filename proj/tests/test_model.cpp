#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <random>

#include "test_util.hpp"
#include "wfg/model.hpp"
#include "wfg/single_wf.hpp"

using namespace wfg;
namespace tu = testutil;

TEST_CASE("canonicalization sorts noise nondecreasing and keeps the permutation") {
  ChannelProfile p = canonicalize_profile({1.0 / 3, 1.0 / 3, 1.0 / 3}, {2.89, 1.0, 1.7});
  CHECK(p.noise == std::vector<double>{1.0, 1.7, 2.89});
  CHECK(p.to_original == std::vector<std::size_t>{1, 2, 0});
}

TEST_CASE("canonicalization sorts budgets nonincreasing and keeps the permutation") {
  GameSpec spec = validate_and_canonicalize({1.0}, {1.0}, 0.5, {1.0, 5.0});
  CHECK(spec.budgets == std::vector<double>{5.0, 1.0});
  CHECK(spec.user_to_original == std::vector<std::size_t>{1, 0});
}

TEST_CASE("noise ties keep the original relative order") {
  ChannelProfile p = canonicalize_profile({0.1, 0.2, 0.3}, {2.0, 1.0, 2.0});
  CHECK(p.to_original == std::vector<std::size_t>{1, 0, 2});
  CHECK(p.weights == std::vector<double>{0.2, 0.1, 0.3});
}

TEST_CASE("validation rejects malformed inputs") {
  CHECK_THROWS_AS(validate_and_canonicalize({1.0}, {1.0}, 1.2, {1.0}), CrosstalkOutOfRange);
  CHECK_THROWS_AS(validate_and_canonicalize({1.0}, {1.0}, -0.1, {1.0}), CrosstalkOutOfRange);
  CHECK_THROWS_AS(validate_and_canonicalize({1.0}, {-1.0}, 0.5, {1.0}), NonPositiveValue);
  CHECK_THROWS_AS(validate_and_canonicalize({0.0}, {1.0}, 0.5, {1.0}), NonPositiveValue);
  CHECK_THROWS_AS(validate_and_canonicalize({1.0}, {1.0}, 0.5, {0.0}), NonPositiveValue);
  CHECK_THROWS_AS(validate_and_canonicalize({1.0, 1.0}, {1.0}, 0.5, {1.0}), DimensionMismatch);
  CHECK_THROWS_AS(validate_and_canonicalize({}, {}, 0.5, {1.0}), DimensionMismatch);
  CHECK_THROWS_AS(validate_and_canonicalize({1.0}, {1.0}, 0.5, {}), DimensionMismatch);
  // g = 1 is accepted at validation; only the closed-form solver rejects it.
  CHECK_NOTHROW(validate_and_canonicalize({1.0}, {1.0}, 1.0, {1.0}));
}

TEST_CASE("de-canonicalization undoes canonicalization") {
  std::mt19937_64 rng(71);
  for (int trial = 0; trial < 50; ++trial) {
    std::uniform_int_distribution<std::size_t> nd(1, 9);
    const std::size_t n = nd(rng);
    std::vector<double> weights(n), noise(n), values(n);
    for (std::size_t i = 0; i < n; ++i) {
      weights[i] = tu::log_uniform(rng, 0.1, 2.0);
      noise[i] = tu::log_uniform(rng, 0.2, 50.0);
      values[i] = tu::log_uniform(rng, 0.1, 10.0);
    }
    ChannelProfile p = canonicalize_profile(weights, noise);
    CHECK(to_original_channel_order(p, p.noise) == noise);
    CHECK(to_original_channel_order(p, p.weights) == weights);
    CHECK(to_original_channel_order(p, to_canonical_channel_order(p, values)) == values);
  }
}

TEST_CASE("profile order mapping round-trips") {
  GameSpec spec = validate_and_canonicalize({0.3, 0.5}, {4.0, 2.0}, 0.4, {1.0, 3.0});
  StrategyProfile original;
  original.strategies = {Strategy{{1.0, 2.0}}, Strategy{{3.0, 4.0}}};
  StrategyProfile canonical = to_canonical_orders(spec, original);
  // canonical user 0 is original user 1 (budget 3), canonical channel 0 is
  // original channel 1 (noise 2).
  CHECK(canonical.strategies[0].powers == std::vector<double>{4.0, 3.0});
  CHECK(tu::profile_distance(to_original_orders(spec, canonical), original) == 0.0);
}

TEST_CASE("payoff matches the reference single-user value") {
  ChannelProfile p = tu::ex_profile();
  StrategyProfile lone{{Strategy{tu::ex1_strategy()}}};
  CHECK(std::abs(payoff(p, 0.0, 0, lone) - 1.11) < 1e-2);
}

TEST_CASE("payoff is zero exactly for the silent strategy") {
  ChannelProfile p = tu::ex_profile();
  StrategyProfile zero{{Strategy{std::vector<double>(5, 0.0)}}};
  CHECK(payoff(p, 0.0, 0, zero) == 0.0);
  StrategyProfile tiny{{Strategy{{0.0, 0.0, 1e-9, 0.0, 0.0}}}};
  CHECK(payoff(p, 0.0, 0, tiny) > 0.0);
}

TEST_CASE("payoffs at the printed two-user profile") {
  GameSpec spec = tu::ex2_spec();
  StrategyProfile printed = tu::printed_two_user_profile();
  CHECK(payoff(spec.profile, spec.g, 0, printed) == doctest::Approx(0.801).epsilon(0.0025));
  CHECK(payoff(spec.profile, spec.g, 1, printed) == doctest::Approx(0.116).epsilon(0.017));
  CHECK(sum_rate(spec.profile, spec.g, printed) == doctest::Approx(0.917).epsilon(0.0033));
}

TEST_CASE("payoffs at the printed three-user profile") {
  GameSpec spec = tu::ex3_spec();
  StrategyProfile printed = tu::printed_three_user_profile();
  CHECK(payoff(spec.profile, spec.g, 0, printed) == doctest::Approx(0.728).epsilon(0.003));
  CHECK(payoff(spec.profile, spec.g, 1, printed) == doctest::Approx(0.113).epsilon(0.018));
  CHECK(payoff(spec.profile, spec.g, 2, printed) == doctest::Approx(0.055).epsilon(0.02));
  CHECK(sum_rate(spec.profile, spec.g, printed) == doctest::Approx(0.896).epsilon(0.0045));
}

TEST_CASE("effective noise") {
  SUBCASE("g = 0 leaves the floor untouched") {
    GameSpec spec = tu::ex2_spec(0.0);
    StrategyProfile printed = tu::printed_two_user_profile();
    CHECK(effective_noise(spec.profile, 0.0, 0, printed) == spec.profile.noise);
  }
  SUBCASE("direct two-channel substitution") {
    GameSpec spec = validate_and_canonicalize({1.0, 1.0}, {1.0, 1.0}, 0.5, {1.0, 1.0});
    StrategyProfile p;
    p.strategies = {Strategy{{0.0, 0.0}}, Strategy{{2.0, 0.0}}};
    CHECK(effective_noise(spec.profile, 0.5, 0, p) == std::vector<double>{2.0, 1.0});
  }
  SUBCASE("user 1 against the printed user-2 strategy") {
    GameSpec spec = tu::ex2_spec();
    const std::vector<double> eff =
        effective_noise(spec.profile, spec.g, 0, tu::printed_two_user_profile());
    const std::vector<double> expected{2.895, 3.263, 3.890, 4.955, 8.352};
    CHECK(tu::max_abs_diff(eff, expected) < 2e-3);
  }
}

TEST_CASE("sum rate of a single user equals its payoff") {
  ChannelProfile p = tu::ex_profile();
  StrategyProfile lone{{Strategy{tu::ex1_strategy()}}};
  CHECK(sum_rate(p, 0.0, lone) == payoff(p, 0.0, 0, lone));
}

TEST_CASE("payoff is monotone in own power and antitone in opponent power") {
  std::mt19937_64 rng(402);
  for (int trial = 0; trial < 20; ++trial) {
    GameSpec spec = tu::random_spec(rng, 3, 6, 0.7);
    if (spec.users() < 2) continue;
    StrategyProfile p;
    p.strategies.resize(spec.users());
    std::uniform_real_distribution<double> u(0.0, 3.0);
    for (auto& s : p.strategies) {
      s.powers.resize(spec.channels());
      for (double& x : s.powers) x = u(rng);
    }
    std::uniform_int_distribution<std::size_t> ch(0, spec.channels() - 1);
    const std::size_t i = ch(rng);
    const double base = payoff(spec.profile, spec.g, 0, p);

    StrategyProfile own = p;
    own.strategies[0].powers[i] += 0.5;
    CHECK(payoff(spec.profile, spec.g, 0, own) > base);

    StrategyProfile rival = p;
    rival.strategies[1].powers[i] += 0.5;
    CHECK(payoff(spec.profile, spec.g, 0, rival) < base);
  }
}

TEST_CASE("payoff is concave along feasible segments") {
  std::mt19937_64 rng(1974);
  for (int trial = 0; trial < 40; ++trial) {
    GameSpec spec = tu::random_spec(rng, 3, 7, 0.6);
    StrategyProfile others;
    others.strategies.assign(spec.users(),
                             Strategy{std::vector<double>(spec.channels(), 0.0)});
    std::uniform_real_distribution<double> u(0.0, 2.0);
    for (std::size_t j = 1; j < spec.users(); ++j) {
      for (double& x : others.strategies[j].powers) x = u(rng);
    }
    const auto random_feasible = [&] {
      std::vector<double> powers(spec.channels());
      double spent = 0.0;
      for (std::size_t i = 0; i < spec.channels(); ++i) {
        powers[i] = u(rng) + 1e-3;
        spent += spec.profile.weights[i] * powers[i];
      }
      for (double& x : powers) x *= spec.budgets[0] / spent;
      return powers;
    };
    const std::vector<double> a = random_feasible();
    const std::vector<double> b = random_feasible();
    std::vector<double> mid(spec.channels());
    for (std::size_t i = 0; i < spec.channels(); ++i) mid[i] = 0.5 * (a[i] + b[i]);

    const auto value = [&](const std::vector<double>& powers) {
      StrategyProfile p = others;
      p.strategies[0].powers = powers;
      return payoff(spec.profile, spec.g, 0, p);
    };
    CHECK(value(mid) >= 0.5 * (value(a) + value(b)) - 1e-12);
  }
}
