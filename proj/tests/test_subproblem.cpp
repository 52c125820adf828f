#include <cmath>
#include <stdexcept>
#include <vector>

#include "doctest.h"

#include "d2d/rng.hpp"
#include "d2d/subproblem.hpp"

using namespace d2d;

namespace {

SubproblemInstance random_instance(int N, Rng& rng) {
  SubproblemInstance inst;
  inst.interference.resize(N);
  inst.alpha.resize(N);
  inst.mask.resize(N);
  for (int n = 0; n < N; ++n) {
    inst.interference[n] = std::pow(10.0, rng.uniform(-4.0, 0.0));
    inst.alpha[n] = rng.uniform() < 0.2 ? 0.0 : -std::pow(10.0, rng.uniform(-2.0, 2.0));
    inst.mask[n] = rng.uniform(0.05, 0.4);
  }
  inst.budget = rng.uniform(0.05, 0.5);
  return inst;
}

// Exhaustive search over an axis-aligned grid, projecting onto the budget.
double grid_oracle(const SubproblemInstance& inst, int points_per_dim) {
  const int N = static_cast<int>(inst.mask.size());
  std::vector<int> idx(N, 0);
  std::vector<double> p(N);
  double best = -1e300;
  for (;;) {
    double total = 0.0;
    for (int n = 0; n < N; ++n) {
      p[n] = inst.mask[n] * idx[n] / (points_per_dim - 1);
      total += p[n];
    }
    if (total <= inst.budget)
      best = std::max(best, subproblem_objective(inst, p));
    int n = 0;
    while (n < N && ++idx[n] == points_per_dim) idx[n++] = 0;
    if (n == N) break;
  }
  return best;
}

}  // namespace

TEST_CASE("single carrier analytic solutions") {
  SubproblemInstance inst;
  inst.interference = {0.01};
  inst.alpha = {0.0};
  inst.budget = 0.2;
  inst.mask = {0.5};
  // no penalty: pour the whole budget (mask allows it)
  auto sol = solve_subproblem(inst);
  CHECK(sol.power[0] == doctest::Approx(0.2).epsilon(1e-10));
  CHECK(sol.kkt_residual < 1e-6);

  // mask binds
  inst.mask = {0.15};
  sol = solve_subproblem(inst);
  CHECK(sol.power[0] == doctest::Approx(0.15).epsilon(1e-10));

  // strong penalty: unconstrained maximizer -1/(ln2 a) - i interior
  inst.mask = {0.5};
  inst.alpha = {-10.0};
  sol = solve_subproblem(inst);
  const double expect = 1.0 / (std::log(2.0) * 10.0) - 0.01;
  CHECK(sol.power[0] == doctest::Approx(expect).epsilon(1e-8));
  CHECK(sol.mu == 0.0);

  // overwhelming penalty drives the power to zero
  inst.alpha = {-1e6};
  sol = solve_subproblem(inst);
  CHECK(sol.power[0] == 0.0);
}

TEST_CASE("two carriers, equal interference, no penalty: even split") {
  SubproblemInstance inst;
  inst.interference = {0.02, 0.02};
  inst.alpha = {0.0, 0.0};
  inst.budget = 0.2;
  inst.mask = {1.0, 1.0};
  const auto sol = solve_subproblem(inst);
  CHECK(sol.power[0] == doctest::Approx(0.1).epsilon(1e-8));
  CHECK(sol.power[1] == doctest::Approx(0.1).epsilon(1e-8));
  CHECK(sol.mu > 0.0);
  CHECK(sol.kkt_residual < 1e-6);
}

TEST_CASE("waterfilling levels equalize across active carriers") {
  SubproblemInstance inst;
  inst.interference = {0.01, 0.05, 0.3};
  inst.alpha = {0.0, 0.0, 0.0};
  inst.budget = 0.15;
  inst.mask = {1.0, 1.0, 1.0};
  const auto sol = solve_subproblem(inst);
  CHECK(sol.kkt_residual < 1e-6);
  double total = 0.0;
  for (double p : sol.power) total += p;
  CHECK(total == doctest::Approx(0.15).epsilon(1e-8));
  // water level i_n + p_n equal wherever p_n > 0
  double level = -1.0;
  for (int n = 0; n < 3; ++n)
    if (sol.power[n] > 1e-9) {
      const double l = inst.interference[n] + sol.power[n];
      if (level < 0)
        level = l;
      else
        CHECK(l == doctest::Approx(level).epsilon(1e-6));
    }
  // worst carrier gets the least power
  CHECK(sol.power[0] >= sol.power[1]);
  CHECK(sol.power[1] >= sol.power[2]);
}

TEST_CASE("random instances beat a grid oracle and satisfy KKT") {
  Rng rng(404);
  for (int trial = 0; trial < 60; ++trial) {
    const int N = 1 + static_cast<int>(rng.uniform() * 2);  // 1 or 2
    const SubproblemInstance inst = random_instance(N, rng);
    const auto sol = solve_subproblem(inst);
    CHECK(sol.kkt_residual < 1e-6);
    double total = 0.0;
    for (int n = 0; n < N; ++n) {
      CHECK(sol.power[n] >= 0.0);
      CHECK(sol.power[n] <= inst.mask[n] + 1e-12);
      total += sol.power[n];
    }
    CHECK(total <= inst.budget + 1e-9);
    const double oracle = grid_oracle(inst, N == 1 ? 4001 : 501);
    CHECK(sol.objective >= oracle - 1e-3);
  }
}

TEST_CASE("perturbing the solution never improves the objective") {
  Rng rng(505);
  for (int trial = 0; trial < 40; ++trial) {
    const SubproblemInstance inst = random_instance(3, rng);
    const auto sol = solve_subproblem(inst);
    for (int probe = 0; probe < 30; ++probe) {
      std::vector<double> q = sol.power;
      double total = 0.0;
      for (int n = 0; n < 3; ++n) {
        q[n] = std::clamp(q[n] + rng.uniform(-0.02, 0.02), 0.0, inst.mask[n]);
        total += q[n];
      }
      if (total > inst.budget)
        for (double& v : q) v *= inst.budget / total;
      CHECK(subproblem_objective(inst, q) <= sol.objective + 1e-7);
    }
  }
}

TEST_CASE("input validation") {
  SubproblemInstance inst;
  inst.interference = {0.01, -0.5};
  inst.alpha = {0.0, 0.0};
  inst.budget = 0.1;
  inst.mask = {1.0, 1.0};
  CHECK_THROWS_AS(solve_subproblem(inst), std::invalid_argument);

  inst.interference = {0.01, 0.5};
  inst.alpha = {0.0, 2.0};  // positive penalty is not admissible
  CHECK_THROWS_AS(solve_subproblem(inst), std::invalid_argument);

  inst.alpha = {0.0, std::nan("")};
  CHECK_THROWS_AS(solve_subproblem(inst), std::invalid_argument);

  inst.alpha = {0.0, 0.0};
  inst.budget = -1.0;
  CHECK_THROWS_AS(solve_subproblem(inst), std::invalid_argument);
}
