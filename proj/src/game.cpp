#include "d2d/game.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "d2d/sounding.hpp"

namespace d2d {

namespace {

// Objective tracked by the dynamics: sum rate, plus the interference-price
// terms when multipliers are present (the Lagrangian for fixed nu).
double dynamics_objective(const PowerProfile& p, const Scenario& sc,
                          const std::vector<double>* nu) {
  double obj = sum_rate(p, sc);
  if (nu) {
    for (int b = 0; b < sc.B; ++b)
      for (int n = 0; n < sc.N; ++n) {
        double interference = 0.0;
        for (int k = 0; k < sc.K; ++k)
          interference += sc.enb_gain(k, b, n) * p.at(k, n);
        obj += (*nu)[b * sc.N + n] * (sc.threshold(b, n) - interference);
      }
  }
  return obj;
}

std::vector<int> resolve_order(const std::vector<int>& order, int num_users) {
  if (order.empty()) {
    std::vector<int> identity(num_users);
    std::iota(identity.begin(), identity.end(), 0);
    return identity;
  }
  std::vector<int> sorted = order;
  std::sort(sorted.begin(), sorted.end());
  for (int k = 0; k < num_users; ++k)
    if (sorted[k] != k)
      throw std::invalid_argument("game: order is not a permutation of users");
  return order;
}

SubproblemInstance build_instance(int k, const PowerProfile& p,
                                  const Scenario& sc,
                                  const std::vector<double>* nu,
                                  bool zero_alpha, bool use_sounding) {
  SubproblemInstance inst;
  inst.interference.resize(sc.N);
  for (int n = 0; n < sc.N; ++n)
    inst.interference[n] = normalized_interference(k, n, p, sc);
  if (zero_alpha)
    inst.alpha.assign(sc.N, 0.0);
  else
    inst.alpha = penalty_coefficients(k, p, sc, nu, use_sounding);
  inst.budget = sc.p_budget[k];
  inst.mask.resize(sc.N);
  for (int n = 0; n < sc.N; ++n) inst.mask[n] = sc.mask(k, n);
  return inst;
}

}  // namespace

std::vector<double> penalty_coefficients(int k, const PowerProfile& p,
                                         const Scenario& sc,
                                         const std::vector<double>* nu,
                                         bool use_sounding) {
  std::vector<double> coeffs;
  if (use_sounding) {
    const SoundingFrame frame = build_frame(p, nu, sc, /*p0=*/1.0);
    coeffs = measure_and_estimate(k, frame, sc);
  } else {
    coeffs = alpha(k, p, sc);
    if (nu)
      for (int n = 0; n < sc.N; ++n)
        for (int b = 0; b < sc.B; ++b)
          coeffs[n] -= (*nu)[b * sc.N + n] * sc.enb_gain(k, b, n);
  }
  // guard against rounding pushing a coefficient above zero
  for (auto& c : coeffs) c = std::min(c, 0.0);
  return coeffs;
}

AllocationResult run_dynamics(const Scenario& sc, const PowerProfile& init,
                              const DynamicsOptions& opts) {
  if (!is_feasible(init, sc))
    throw std::invalid_argument("run_dynamics: infeasible initial profile");
  const std::vector<int> order = resolve_order(opts.game.order, sc.K);

  AllocationResult result;
  result.power = init;
  double obj = dynamics_objective(result.power, sc, opts.nu);
  result.trace.round_objective.push_back(obj);

  for (int round = 0; round < opts.game.max_rounds; ++round) {
    const double round_start = obj;
    for (int l : order) {
      const double before = obj;
      const SubproblemInstance inst = build_instance(
          l, result.power, sc, opts.nu, opts.zero_alpha, opts.use_sounding);
      const SubproblemSolution sol = solve_subproblem(inst);
      for (int n = 0; n < sc.N; ++n) result.power.at(l, n) = sol.power[n];
      obj = dynamics_objective(result.power, sc, opts.nu);
      if (opts.game.record_updates)
        result.trace.updates.push_back({l, before, obj});
    }
    result.trace.round_objective.push_back(obj);
    result.trace.rounds_to_converge = round + 1;
    if (obj - round_start < opts.game.eps) {
      result.converged = true;
      break;
    }
  }

  result.rates = rate_report(result.power, sc);
  result.nash_gap = nash_check(result.power, sc, opts.nu);
  return result;
}

AllocationResult iadrmp_run(const Scenario& sc, const PowerProfile& init,
                            const GameOptions& opts) {
  DynamicsOptions dyn;
  dyn.game = opts;
  return run_dynamics(sc, init, dyn);
}

AllocationResult iwf_run(const Scenario& sc, const PowerProfile& init,
                         const GameOptions& opts) {
  DynamicsOptions dyn;
  dyn.game = opts;
  dyn.zero_alpha = true;
  return run_dynamics(sc, init, dyn);
}

PowerProfile default_initial_power(const Scenario& sc) {
  PowerProfile p = PowerProfile::zeros(sc.K, sc.N);
  for (int k = 0; k < sc.K; ++k) {
    SubproblemInstance inst;
    inst.interference.resize(sc.N);
    inst.mask.resize(sc.N);
    for (int n = 0; n < sc.N; ++n) {
      inst.interference[n] = sc.noise(k, n) / sc.gain(k, k, n);
      inst.mask[n] = sc.mask(k, n);
    }
    inst.alpha.assign(sc.N, 0.0);
    inst.budget = sc.p_budget[k];
    const SubproblemSolution sol = solve_subproblem(inst);
    for (int n = 0; n < sc.N; ++n) p.at(k, n) = sol.power[n];
  }
  return p;
}

AllocationResult multistart_run(const Scenario& sc,
                                const std::vector<std::vector<int>>& orders,
                                const std::vector<PowerProfile>& inits,
                                const GameOptions& opts) {
  if (orders.empty() || inits.empty())
    throw std::invalid_argument("multistart_run: empty configuration lists");
  AllocationResult best;
  bool have_best = false;
  for (const auto& order : orders) {
    for (const auto& init : inits) {
      GameOptions run_opts = opts;
      run_opts.order = order;
      AllocationResult result = iadrmp_run(sc, init, run_opts);
      if (!have_best || result.rates.sum_rate > best.rates.sum_rate) {
        best = std::move(result);
        have_best = true;
      }
    }
  }
  return best;
}

std::vector<std::vector<int>> lexicographic_orders(int num_users, int count) {
  std::vector<std::vector<int>> orders;
  std::vector<int> perm(num_users);
  std::iota(perm.begin(), perm.end(), 0);
  do {
    orders.push_back(perm);
  } while (static_cast<int>(orders.size()) < count &&
           std::next_permutation(perm.begin(), perm.end()));
  return orders;
}

double nash_check(const PowerProfile& p, const Scenario& sc,
                  const std::vector<double>* nu) {
  const double current = dynamics_objective(p, sc, nu);
  double gap = 0.0;
  PowerProfile candidate = p;
  for (int k = 0; k < sc.K; ++k) {
    const SubproblemInstance inst =
        build_instance(k, p, sc, nu, /*zero_alpha=*/false, /*sounding=*/false);
    const SubproblemSolution sol = solve_subproblem(inst);
    for (int n = 0; n < sc.N; ++n) candidate.at(k, n) = sol.power[n];
    gap = std::max(gap, dynamics_objective(candidate, sc, nu) - current);
    for (int n = 0; n < sc.N; ++n) candidate.at(k, n) = p.at(k, n);
  }
  return gap;
}

}  // namespace d2d
