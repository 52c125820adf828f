#include <cmath>
#include <vector>

#include "doctest.h"

#include "d2d/underlay.hpp"
#include "helpers.hpp"

using namespace d2d;

TEST_CASE("one exact cut on the unit ball") {
  DualState state;
  state.M = 2;
  state.center = {0.0, 0.0};
  state.shape_inverse = {1.0, 0.0, 0.0, 1.0};
  const bool updated = ellipsoid_step(state, {1.0, 0.0});
  REQUIRE(updated);
  CHECK(state.center[0] == doctest::Approx(-1.0 / 3.0).epsilon(1e-14));
  CHECK(state.center[1] == doctest::Approx(0.0).epsilon(1e-14));
  CHECK(state.shape_inverse[0] == doctest::Approx(4.0 / 9.0).epsilon(1e-14));
  CHECK(state.shape_inverse[1] == doctest::Approx(0.0).epsilon(1e-14));
  CHECK(state.shape_inverse[2] == doctest::Approx(0.0).epsilon(1e-14));
  CHECK(state.shape_inverse[3] == doctest::Approx(4.0 / 3.0).epsilon(1e-14));
}

TEST_CASE("zero direction means convergence, not an update") {
  DualState state;
  state.M = 2;
  state.center = {0.5, -0.25};
  state.shape_inverse = {2.0, 0.1, 0.1, 1.0};
  const DualState before = state;
  CHECK(!ellipsoid_step(state, {0.0, 0.0}));
  CHECK(state.center == before.center);
  CHECK(state.shape_inverse == before.shape_inverse);
}

TEST_CASE("volume shrinks at the theoretical rate") {
  for (int M : {2, 4}) {
    DualState state;
    state.M = M;
    state.center.assign(M, 0.0);
    state.shape_inverse.assign(M * M, 0.0);
    for (int i = 0; i < M; ++i) state.shape_inverse[i * M + i] = 1.0;

    Rng rng(1000 + M);
    double prev = ellipsoid_log_volume(state);
    double total_drop = 0.0;
    const int steps = 100;
    for (int s = 0; s < steps; ++s) {
      std::vector<double> d(M);
      for (double& v : d) v = rng.normal(0.0, 1.0);
      REQUIRE(ellipsoid_step(state, d));
      const double now = ellipsoid_log_volume(state);
      CHECK(now < prev);
      total_drop += prev - now;
      prev = now;
    }
    const double expected_drop = 1.0 / (2.0 * M);
    CHECK(total_drop / steps ==
          doctest::Approx(expected_drop).epsilon(0.05));
  }
}

TEST_CASE("lagrangian and subgradient identities") {
  Rng rng(550);
  const Scenario sc =
      d2d::testing::random_scenario(3, 2, 1, rng, 1e-13,
                                    MaskMode::kInterferenceDerived);
  const PowerProfile p = d2d::testing::random_power(sc, rng);
  const std::vector<double> zero(2, 0.0);
  CHECK(lagrangian_value(p, zero, sc) ==
        doctest::Approx(sum_rate(p, sc)).epsilon(1e-14));

  const std::vector<double> nu = {3e12, 7e12};
  const std::vector<double> d = dual_subgradient(p, sc);
  const std::vector<double> interference = interference_at_enbs(p, sc);
  for (int n = 0; n < 2; ++n)
    CHECK(d[n] == doctest::Approx(sc.q[n] - interference[n]).epsilon(1e-14));
  double expect = sum_rate(p, sc);
  for (int n = 0; n < 2; ++n) expect += nu[n] * d[n];
  CHECK(lagrangian_value(p, nu, sc) == doctest::Approx(expect).epsilon(1e-12));
}

TEST_CASE("slack thresholds leave the unconstrained equilibrium untouched") {
  Rng rng(551);
  const Scenario sc = d2d::testing::random_scenario(3, 3, 1, rng, /*q=*/1.0);
  const PowerProfile init = default_initial_power(sc);
  const AllocationResult overlay = iadrmp_run(sc, init, GameOptions{});
  const UnderlayResult underlay = iadrmpic_run(sc, init, UnderlayOptions{});
  CHECK(underlay.converged);
  for (double v : underlay.nu) CHECK(v == 0.0);
  // the outer loop keeps polishing, so it can only improve on a single run
  CHECK(underlay.primal_value >= overlay.rates.sum_rate - 1e-9);
}

TEST_CASE("enormous prices shut the transmitters down") {
  Rng rng(552);
  const Scenario sc =
      d2d::testing::random_scenario(3, 2, 1, rng, 1e-13,
                                    MaskMode::kInterferenceDerived);
  const std::vector<double> nu(2, 1e30);
  GameOptions opts;
  const PowerProfile p = inner_solve(nu, default_initial_power(sc), sc, opts);
  for (double v : p.p) CHECK(v <= 1e-12);
}

TEST_CASE("tight thresholds are enforced within the slack") {
  Rng rng(553);
  for (int trial = 0; trial < 5; ++trial) {
    const Scenario sc =
        d2d::testing::random_scenario(4, 3, 1, rng, 1e-13,
                                      MaskMode::kInterferenceDerived);
    const UnderlayResult result =
        iadrmpic_run(sc, default_initial_power(sc), UnderlayOptions{});
    CHECK(result.converged);
    const std::vector<double> interference =
        interference_at_enbs(result.power, sc);
    for (int n = 0; n < 3; ++n)
      CHECK(interference[n] <= 1.05 * sc.q[n]);
    CHECK(result.max_subgradient_violation <= 1e-6);
    CHECK(is_feasible(result.power, sc));
  }
}

TEST_CASE("dual bound dominates the feasible primal") {
  Rng rng(554);
  for (int trial = 0; trial < 5; ++trial) {
    const Scenario sc =
        d2d::testing::random_scenario(3, 2, 1, rng, 1e-13,
                                      MaskMode::kInterferenceDerived);
    const UnderlayResult primal =
        iadrmpic_run(sc, default_initial_power(sc), UnderlayOptions{});
    const PowerProfile feasible = scale_into_feasibility(primal.power, sc);
    const double feasible_value = sum_rate(feasible, sc);
    const std::vector<double> check = interference_at_enbs(feasible, sc);
    for (int n = 0; n < 2; ++n) CHECK(check[n] <= sc.q[n] * (1.0 + 1e-12));
    const DualBoundResult dual = dual_upper_bound(sc, 6, 2, 1e-4, 0, &feasible);
    CHECK(dual.bound >= feasible_value - 1e-9 * std::abs(feasible_value));
  }
}

TEST_CASE("zero thresholds force silence") {
  Rng rng(555);
  Scenario sc =
      d2d::testing::random_scenario(2, 2, 1, rng, 0.0,
                                    MaskMode::kInterferenceDerived);
  // interference-derived masks with q = 0 are all zero
  for (double m : sc.p_mask) CHECK(m == 0.0);
  const UnderlayResult result =
      iadrmpic_run(sc, PowerProfile::zeros(2, 2), UnderlayOptions{});
  CHECK(result.primal_value == 0.0);
  for (double v : result.power.p) CHECK(v == 0.0);
}
