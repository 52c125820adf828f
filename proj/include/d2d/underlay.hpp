#pragma once

#include <vector>

#include "d2d/game.hpp"
#include "d2d/scenario.hpp"

namespace d2d {

// Lagrange multipliers plus the ellipsoid iterate for the dual solver. The
// shape is maintained in inverse form (P = A^-1), so each step is a rank-one
// update with no matrix inversion.
struct DualState {
  int M = 0;                         // B*N
  std::vector<double> center;        // nu iterate, length M
  std::vector<double> shape_inverse; // M*M symmetric positive definite
  int iteration = 0;
};

struct OuterTraceRow {
  int step = 0;
  double nu_min = 0.0;
  double nu_max = 0.0;
  double nu_mean = 0.0;
  double primal_value = 0.0;      // sum rate of the current local maximizer
  double lagrangian = 0.0;
  double max_interference_ratio = 0.0;  // max over (b,n) of interference/Q
  double power_delta = 0.0;       // max_k ||p_k change||_2
  double gamma = 0.0;
};

struct UnderlayResult {
  PowerProfile power;
  std::vector<double> nu;            // B*N
  std::vector<double> interference;  // B*N, sum_k A^n_{k,b} p_{k,n}
  double primal_value = 0.0;
  bool converged = false;
  int outer_iterations = 0;
  double max_subgradient_violation = 0.0;  // worst violation of the
                                           // subgradient inequality seen
                                           // across outer steps
  std::vector<OuterTraceRow> trace;
};

struct UnderlayOptions {
  double gamma = 0.1;           // subgradient step, halved on stagnation
  double eps_inner = 1e-4;      // inner better-response tolerance (rate units)
  double eps_outer = 1e-6;      // max per-user power change, W
  int max_outer = 2000;
  double slack_tol = 0.05;      // tolerated relative constraint overshoot
  int max_inner_rounds = 10000;
  std::vector<int> order;
};

struct DualBoundResult {
  double bound = 0.0;
  std::vector<double> nu;  // minimizing multipliers found
  bool collapsed_early = false;
  int steps = 0;
  std::vector<double> evaluated_values;  // dual evaluations, in step order
};

double lagrangian_value(const PowerProfile& p, const std::vector<double>& nu,
                        const Scenario& sc);

// Better-response dynamics on the penalized objective for fixed nu >= 0;
// returns a local maximizer of the Lagrangian.
PowerProfile inner_solve(const std::vector<double>& nu,
                         const PowerProfile& init, const Scenario& sc,
                         const GameOptions& opts);

std::vector<double> interference_at_enbs(const PowerProfile& p,
                                         const Scenario& sc);  // B*N

// d_{b,n} = Q_{b,n} - sum_k A^n_{k,b} p_{k,n}
std::vector<double> dual_subgradient(const PowerProfile& p, const Scenario& sc);

// Initial ball: center 0, radius large enough that the penalty dominates any
// rate gradient (contains the dual optimum).
DualState make_initial_ellipsoid(const Scenario& sc);

// One cut along direction d. Returns false (no update) when d = 0, which
// signals convergence of the ellipsoid iteration.
bool ellipsoid_step(DualState& state, const std::vector<double>& d);

double ellipsoid_log_volume(const DualState& state);

// Uniform power scaling until every eNB constraint holds.
PowerProfile scale_into_feasibility(const PowerProfile& p, const Scenario& sc);

// Lagrangian-dual upper bound on the interference-constrained optimum: the
// ellipsoid method on min g(nu) s.t. nu >= 0, with the inner maximization
// approximated by multi-start. Every evaluated dual value is a valid bound;
// the returned value is the minimum over evaluations. When a feasible
// extra_init is supplied it joins the inner start set, which guarantees
// bound >= sum_rate(extra_init) because the inner dynamics never decreases
// the penalized objective.
DualBoundResult dual_upper_bound(const Scenario& sc, int num_orders,
                                 int num_inits, double eps_inner,
                                 int max_steps,
                                 const PowerProfile* extra_init = nullptr);

// Heuristic: projected subgradient on nu, warm-started inner better-response
// dynamics. Converged when the power iterate settles and the interference
// overshoot is within slack_tol.
UnderlayResult iadrmpic_run(const Scenario& sc, const PowerProfile& init,
                            const UnderlayOptions& opts);

}  // namespace d2d
