#include "d2d/subproblem.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace d2d {

namespace {

constexpr double kLn2 = 0.69314718055994530942;
constexpr int kMaxBisectionIters = 200;

double clamp(double x, double lo, double hi) {
  return std::min(std::max(x, lo), hi);
}

// Candidate allocation at a given budget multiplier. mu - alpha_n > 0 holds
// whenever mu > 0 or alpha_n < 0; the alpha_n = 0, mu = 0 corner is the
// cap-limited limit of the solution map.
double power_at(double mu, double i_n, double alpha_n, double mask_n) {
  const double denom = mu - alpha_n;
  if (denom <= 0.0) return mask_n;
  return clamp(1.0 / (kLn2 * denom) - i_n, 0.0, mask_n);
}

void validate(const SubproblemInstance& inst) {
  const std::size_t n = inst.interference.size();
  if (inst.alpha.size() != n || inst.mask.size() != n)
    throw std::invalid_argument("subproblem: inconsistent vector sizes");
  if (!(inst.budget > 0.0) || !std::isfinite(inst.budget))
    throw std::invalid_argument("subproblem: budget must be positive");
  for (std::size_t idx = 0; idx < n; ++idx) {
    if (!std::isfinite(inst.interference[idx]) || inst.interference[idx] <= 0.0)
      throw std::invalid_argument("subproblem: interference must be positive and finite");
    if (!std::isfinite(inst.alpha[idx]) || inst.alpha[idx] > 0.0)
      throw std::invalid_argument("subproblem: alpha must be non-positive and finite");
    if (!std::isfinite(inst.mask[idx]) || inst.mask[idx] < 0.0)
      throw std::invalid_argument("subproblem: mask must be non-negative and finite");
  }
}

}  // namespace

double subproblem_objective(const SubproblemInstance& inst,
                            const std::vector<double>& p) {
  double acc = 0.0;
  for (std::size_t n = 0; n < p.size(); ++n)
    acc += std::log2(1.0 + p[n] / inst.interference[n]) + inst.alpha[n] * p[n];
  return acc;
}

SubproblemSolution solve_subproblem(const SubproblemInstance& inst) {
  validate(inst);
  const int n_sub = static_cast<int>(inst.interference.size());
  SubproblemSolution sol;
  sol.power.assign(n_sub, 0.0);

  // mu = 0 candidate
  double total = 0.0;
  for (int n = 0; n < n_sub; ++n) {
    sol.power[n] = power_at(0.0, inst.interference[n], inst.alpha[n], inst.mask[n]);
    total += sol.power[n];
  }
  const double tol_p = 1e-10 * inst.budget;
  if (total <= inst.budget + tol_p) {
    sol.mu = 0.0;
  } else {
    double lo = 0.0;
    double hi = 0.0;
    for (int n = 0; n < n_sub; ++n)
      hi = std::max(hi, 1.0 / (kLn2 * inst.interference[n]));
    // sum(lo) > budget, sum(hi) = 0 <= budget
    int iter = 0;
    for (; iter < kMaxBisectionIters; ++iter) {
      const double mid = 0.5 * (lo + hi);
      total = 0.0;
      for (int n = 0; n < n_sub; ++n) {
        sol.power[n] =
            power_at(mid, inst.interference[n], inst.alpha[n], inst.mask[n]);
        total += sol.power[n];
      }
      if (std::fabs(total - inst.budget) <= tol_p) {
        sol.mu = mid;
        break;
      }
      if (total > inst.budget)
        lo = mid;
      else
        hi = mid;
    }
    sol.bisection_iters = iter;
    if (iter == kMaxBisectionIters) {
      // Interval is exhausted; accept the feasible endpoint if the residual
      // budget error is tiny, otherwise report the failure.
      total = 0.0;
      for (int n = 0; n < n_sub; ++n) {
        sol.power[n] =
            power_at(hi, inst.interference[n], inst.alpha[n], inst.mask[n]);
        total += sol.power[n];
      }
      sol.mu = hi;
      if (std::fabs(total - inst.budget) > 1e-6 * inst.budget)
        throw std::runtime_error(
            "subproblem: bisection failed to meet the power budget (residual " +
            std::to_string(total - inst.budget) + " W)");
    }
  }

  sol.objective = subproblem_objective(inst, sol.power);
  sol.kkt_residual = subproblem_kkt_residual(inst, sol);
  return sol;
}

double subproblem_kkt_residual(const SubproblemInstance& inst,
                               const SubproblemSolution& sol) {
  const int n_sub = static_cast<int>(inst.interference.size());
  double residual = 0.0;
  double total = 0.0;
  for (int n = 0; n < n_sub; ++n) {
    const double p = sol.power[n];
    total += p;
    const double interior_margin = 1e-12 * std::max(1.0, inst.mask[n]);
    if (p > interior_margin && p < inst.mask[n] - interior_margin) {
      const double stationarity =
          1.0 / (kLn2 * (inst.interference[n] + p)) + inst.alpha[n] - sol.mu;
      residual = std::max(residual, std::fabs(stationarity));
    }
    // box violations
    residual = std::max(residual, -p);
    residual = std::max(residual, p - inst.mask[n]);
  }
  residual = std::max(residual, total - inst.budget);
  residual = std::max(residual, std::fabs(sol.mu * (total - inst.budget)));
  residual = std::max(residual, -sol.mu);
  return residual;
}

}  // namespace d2d
