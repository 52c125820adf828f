#pragma once

#include <vector>

namespace d2d {

// Per-user convex linearized allocation: maximize
//   sum_n log2(1 + p_n / i_n) + sum_n alpha_n p_n
// over 0 <= p_n <= mask_n, sum_n p_n <= budget.
struct SubproblemInstance {
  std::vector<double> interference;  // i_k, normalized, > 0
  std::vector<double> alpha;         // penalty coefficients, <= 0
  double budget = 0.0;               // P_k
  std::vector<double> mask;          // per-subcarrier caps
};

struct SubproblemSolution {
  std::vector<double> power;
  double mu = 0.0;         // budget dual variable
  double objective = 0.0;
  double kkt_residual = 0.0;
  int bisection_iters = 0;
};

double subproblem_objective(const SubproblemInstance& inst,
                            const std::vector<double>& p);

// Penalty-shifted waterfilling with per-subcarrier caps. The mu=0 candidate
// is tried first; if it exceeds the budget, mu is found by bisection on the
// monotone total-power curve.
SubproblemSolution solve_subproblem(const SubproblemInstance& inst);

// Max stationarity violation over interior coordinates plus complementary
// slackness violation; feasibility violations are folded in as well.
double subproblem_kkt_residual(const SubproblemInstance& inst,
                               const SubproblemSolution& sol);

}  // namespace d2d
