#include <cmath>
#include <vector>

#include "doctest.h"

#include "d2d/game.hpp"
#include "d2d/sounding.hpp"
#include "helpers.hpp"

using namespace d2d;

TEST_CASE("frame contents encode delta and nu") {
  Rng rng(661);
  const Scenario sc = d2d::testing::random_scenario(3, 2, 1, rng);
  const PowerProfile p = d2d::testing::random_power(sc, rng);
  const std::vector<double> nu = {2e11, 5e11};
  const double p0 = 0.5;
  const SoundingFrame frame = build_frame(p, &nu, sc, p0);
  REQUIRE(frame.rx_broadcast.size() == 6);
  REQUIRE(frame.enb_broadcast.size() == 2);
  for (int l = 0; l < 3; ++l) {
    const std::vector<double> d = delta(l, p, sc);
    for (int n = 0; n < 2; ++n)
      CHECK(frame.rx_broadcast[l * 2 + n] ==
            doctest::Approx(d[n] * p0).epsilon(1e-14));
  }
  for (int n = 0; n < 2; ++n)
    CHECK(frame.enb_broadcast[n] == doctest::Approx(nu[n] * p0).epsilon(1e-14));
}

TEST_CASE("estimates reproduce the penalty coefficients exactly") {
  Rng rng(662);
  for (int trial = 0; trial < 20; ++trial) {
    const Scenario sc = d2d::testing::random_scenario(4, 3, 2, rng);
    const PowerProfile p = d2d::testing::random_power(sc, rng);
    std::vector<double> nu(6);
    for (double& v : nu) v = rng.uniform() * 1e12;

    const std::vector<double>* price_cases[] = {nullptr, &nu};
    for (const std::vector<double>* prices : price_cases) {
      const SoundingFrame frame = build_frame(p, prices, sc, 1.0);
      for (int k = 0; k < sc.K; ++k) {
        const std::vector<double> estimated = measure_and_estimate(k, frame, sc);
        const std::vector<double> direct =
            penalty_coefficients(k, p, sc, prices, false);
        for (int n = 0; n < sc.N; ++n) {
          const double scale = std::max(std::abs(direct[n]), 1e-30);
          CHECK(std::abs(estimated[n] - direct[n]) / scale < 1e-12);
        }
      }
    }
  }
}

TEST_CASE("reference power cancels out") {
  Rng rng(663);
  const Scenario sc = d2d::testing::random_scenario(3, 2, 1, rng);
  const PowerProfile p = d2d::testing::random_power(sc, rng);
  const SoundingFrame a = build_frame(p, nullptr, sc, 1.0);
  const SoundingFrame b = build_frame(p, nullptr, sc, 1e-3);
  for (int k = 0; k < sc.K; ++k) {
    const auto ea = measure_and_estimate(k, a, sc);
    const auto eb = measure_and_estimate(k, b, sc);
    for (int n = 0; n < sc.N; ++n)
      CHECK(ea[n] == doctest::Approx(eb[n]).epsilon(1e-12));
  }
}

TEST_CASE("dynamics driven by measurements matches message passing") {
  Rng rng(664);
  for (int trial = 0; trial < 5; ++trial) {
    const Scenario sc = d2d::testing::random_scenario(4, 3, 1, rng);
    const PowerProfile init = default_initial_power(sc);

    DynamicsOptions direct;
    DynamicsOptions sounding;
    sounding.use_sounding = true;
    const AllocationResult a = run_dynamics(sc, init, direct);
    const AllocationResult b = run_dynamics(sc, init, sounding);
    CHECK(a.converged);
    CHECK(b.converged);
    REQUIRE(a.power.p.size() == b.power.p.size());
    for (std::size_t i = 0; i < a.power.p.size(); ++i)
      CHECK(b.power.p[i] ==
            doctest::Approx(a.power.p[i]).epsilon(1e-9));
    CHECK(b.rates.sum_rate == doctest::Approx(a.rates.sum_rate).epsilon(1e-9));
  }
}
