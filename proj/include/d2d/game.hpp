#pragma once

#include <vector>

#include "d2d/rate_model.hpp"
#include "d2d/scenario.hpp"
#include "d2d/subproblem.hpp"

namespace d2d {

struct UpdateRecord {
  int user = 0;
  double objective_before = 0.0;
  double objective_after = 0.0;
};

struct IterationTrace {
  std::vector<double> round_objective;   // sum rate (or Lagrangian) per round
  std::vector<UpdateRecord> updates;
  int rounds_to_converge = 0;
};

struct AllocationResult {
  PowerProfile power;
  RateReport rates;
  IterationTrace trace;
  bool converged = false;
  double nash_gap = 0.0;
};

struct GameOptions {
  double eps = 1e-4;            // round-over-round objective tolerance
  int max_rounds = 10000;
  std::vector<int> order;       // permutation of users; empty = ascending
  bool record_updates = true;
};

// Knobs shared by the overlay game and the underlay inner loop.
struct DynamicsOptions {
  GameOptions game;
  bool zero_alpha = false;               // IWF baseline
  const std::vector<double>* nu = nullptr;  // B*N multipliers (underlay)
  bool use_sounding = false;  // estimate penalties from sounding measurements
};

// Sequential better-response dynamics on the (optionally penalized)
// potential. Each single-user update solves the linearized subproblem at the
// current joint profile; the potential is non-decreasing at every update.
AllocationResult run_dynamics(const Scenario& sc, const PowerProfile& init,
                              const DynamicsOptions& opts);

AllocationResult iadrmp_run(const Scenario& sc, const PowerProfile& init,
                            const GameOptions& opts);

// Iterative waterfilling: same loop with the penalty forced to zero. No
// convergence guarantee; stops at max_rounds or when the round delta drops
// below eps.
AllocationResult iwf_run(const Scenario& sc, const PowerProfile& init,
                         const GameOptions& opts);

// Per-user interference-free waterfilling under budget and masks.
PowerProfile default_initial_power(const Scenario& sc);

// Best final sum rate over orders x initial profiles.
AllocationResult multistart_run(const Scenario& sc,
                                const std::vector<std::vector<int>>& orders,
                                const std::vector<PowerProfile>& inits,
                                const GameOptions& opts);

// First `count` user orderings in lexicographic permutation order.
std::vector<std::vector<int>> lexicographic_orders(int num_users, int count);

// Largest unilateral sum-rate improvement available through one exact
// subproblem resolve at p. Zero (up to tolerance) at a fixed point.
double nash_check(const PowerProfile& p, const Scenario& sc,
                  const std::vector<double>* nu = nullptr);

// Penalty coefficients for user k at profile p: alpha, optionally shifted by
// the interference-price term -sum_b nu_{b,n} A^n_{k,b}.
std::vector<double> penalty_coefficients(int k, const PowerProfile& p,
                                         const Scenario& sc,
                                         const std::vector<double>* nu,
                                         bool use_sounding);

}  // namespace d2d
