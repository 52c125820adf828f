#include "d2d/underlay.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace d2d {

namespace {

constexpr double kLn2 = 0.69314718055994530942;

// Cholesky factorization of a symmetric matrix given in row-major order.
// Returns false if the matrix is not positive definite; otherwise fills in
// log(det).
bool cholesky_logdet(const std::vector<double>& m, int dim, double* logdet) {
  std::vector<double> chol(m);
  double acc = 0.0;
  for (int i = 0; i < dim; ++i) {
    for (int j = 0; j <= i; ++j) {
      double s = chol[i * dim + j];
      for (int k = 0; k < j; ++k) s -= chol[i * dim + k] * chol[j * dim + k];
      if (i == j) {
        if (s <= 0.0) return false;
        chol[i * dim + i] = std::sqrt(s);
        acc += std::log(s);
      } else {
        chol[i * dim + j] = s / chol[j * dim + j];
      }
    }
  }
  if (logdet) *logdet = acc;
  return true;
}

void symmetrize(std::vector<double>& m, int dim) {
  for (int i = 0; i < dim; ++i)
    for (int j = 0; j < i; ++j) {
      const double avg = 0.5 * (m[i * dim + j] + m[j * dim + i]);
      m[i * dim + j] = avg;
      m[j * dim + i] = avg;
    }
}

}  // namespace

double lagrangian_value(const PowerProfile& p, const std::vector<double>& nu,
                        const Scenario& sc) {
  double value = sum_rate(p, sc);
  const std::vector<double> interference = interference_at_enbs(p, sc);
  for (int b = 0; b < sc.B; ++b)
    for (int n = 0; n < sc.N; ++n)
      value += nu[b * sc.N + n] *
               (sc.threshold(b, n) - interference[b * sc.N + n]);
  return value;
}

PowerProfile inner_solve(const std::vector<double>& nu,
                         const PowerProfile& init, const Scenario& sc,
                         const GameOptions& opts) {
  for (double v : nu)
    if (v < 0.0) throw std::invalid_argument("inner_solve: nu must be >= 0");
  DynamicsOptions dyn;
  dyn.game = opts;
  dyn.game.record_updates = false;
  dyn.nu = &nu;
  return run_dynamics(sc, init, dyn).power;
}

std::vector<double> interference_at_enbs(const PowerProfile& p,
                                         const Scenario& sc) {
  std::vector<double> out(static_cast<std::size_t>(sc.B) * sc.N, 0.0);
  for (int b = 0; b < sc.B; ++b)
    for (int n = 0; n < sc.N; ++n) {
      double acc = 0.0;
      for (int k = 0; k < sc.K; ++k)
        acc += sc.enb_gain(k, b, n) * p.at(k, n);
      out[b * sc.N + n] = acc;
    }
  return out;
}

std::vector<double> dual_subgradient(const PowerProfile& p,
                                     const Scenario& sc) {
  std::vector<double> d = interference_at_enbs(p, sc);
  for (int b = 0; b < sc.B; ++b)
    for (int n = 0; n < sc.N; ++n)
      d[b * sc.N + n] = sc.threshold(b, n) - d[b * sc.N + n];
  return d;
}

namespace {

// Multiplier magnitude above which the interference price dominates the
// largest possible rate gradient on (b, n); used both for the ellipsoid
// radius and as the subgradient step scale.
std::vector<double> nu_reference_scale(const Scenario& sc) {
  std::vector<double> ref(static_cast<std::size_t>(sc.B) * sc.N, 0.0);
  for (int b = 0; b < sc.B; ++b)
    for (int n = 0; n < sc.N; ++n) {
      double scale = 0.0;
      for (int k = 0; k < sc.K; ++k) {
        const double a = sc.enb_gain(k, b, n);
        if (a <= 0.0) continue;
        const double i0 = sc.noise(k, n) / sc.gain(k, k, n);
        scale = std::max(scale, 1.0 / (kLn2 * a * i0));
      }
      ref[b * sc.N + n] = scale;
    }
  return ref;
}

}  // namespace

DualState make_initial_ellipsoid(const Scenario& sc) {
  DualState state;
  state.M = sc.B * sc.N;
  state.center.assign(state.M, 0.0);
  const std::vector<double> ref = nu_reference_scale(sc);
  double radius = 1.0;
  for (double r : ref) radius = std::max(radius, r);
  state.shape_inverse.assign(static_cast<std::size_t>(state.M) * state.M, 0.0);
  for (int i = 0; i < state.M; ++i)
    state.shape_inverse[i * state.M + i] = radius * radius;
  return state;
}

bool ellipsoid_step(DualState& state, const std::vector<double>& d) {
  const int m = state.M;
  if (static_cast<int>(d.size()) != m)
    throw std::invalid_argument("ellipsoid_step: dimension mismatch");
  double norm = 0.0;
  for (double v : d) norm += v * v;
  if (norm == 0.0) return false;

  if (m == 1) {
    // Degenerate interval-halving case.
    const double r = std::sqrt(state.shape_inverse[0]);
    state.center[0] -= (d[0] > 0.0 ? 1.0 : -1.0) * r / 2.0;
    state.shape_inverse[0] = state.shape_inverse[0] / 4.0;
    ++state.iteration;
    return true;
  }

  std::vector<double> pd(m, 0.0);  // P d
  for (int i = 0; i < m; ++i) {
    double s = 0.0;
    for (int j = 0; j < m; ++j) s += state.shape_inverse[i * m + j] * d[j];
    pd[i] = s;
  }
  double dpd = 0.0;
  for (int i = 0; i < m; ++i) dpd += d[i] * pd[i];
  if (dpd <= 0.0)
    throw std::runtime_error("ellipsoid_step: shape matrix lost definiteness");
  const double scale = 1.0 / std::sqrt(dpd);
  for (auto& v : pd) v *= scale;  // P d-tilde

  for (int i = 0; i < m; ++i)
    state.center[i] -= pd[i] / (m + 1.0);
  const double grow = static_cast<double>(m) * m / (static_cast<double>(m) * m - 1.0);
  const double shrink = 2.0 / (m + 1.0);
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j)
      state.shape_inverse[i * m + j] =
          grow * (state.shape_inverse[i * m + j] - shrink * pd[i] * pd[j]);
  symmetrize(state.shape_inverse, m);
  if (!cholesky_logdet(state.shape_inverse, m, nullptr))
    throw std::runtime_error("ellipsoid_step: shape matrix became indefinite");
  ++state.iteration;
  return true;
}

double ellipsoid_log_volume(const DualState& state) {
  double logdet = 0.0;
  if (!cholesky_logdet(state.shape_inverse, state.M, &logdet))
    throw std::runtime_error("ellipsoid_log_volume: shape matrix not SPD");
  // Up to the dimension-dependent unit-ball constant.
  return 0.5 * logdet;
}

PowerProfile scale_into_feasibility(const PowerProfile& p, const Scenario& sc) {
  const std::vector<double> interference = interference_at_enbs(p, sc);
  double worst = 1.0;
  for (std::size_t i = 0; i < interference.size(); ++i) {
    if (sc.q[i] > 0.0)
      worst = std::max(worst, interference[i] / sc.q[i]);
    else if (interference[i] > 0.0)
      worst = std::numeric_limits<double>::infinity();
  }
  PowerProfile scaled = p;
  if (std::isinf(worst))
    scaled.p.assign(scaled.p.size(), 0.0);
  else
    for (double& v : scaled.p) v /= worst;
  return scaled;
}

DualBoundResult dual_upper_bound(const Scenario& sc, int num_orders,
                                 int num_inits, double eps_inner,
                                 int max_steps, const PowerProfile* extra_init) {
  DualBoundResult result;
  result.bound = std::numeric_limits<double>::infinity();
  DualState state = make_initial_ellipsoid(sc);
  const double initial_log_volume = ellipsoid_log_volume(state);
  // Per-dimension shrink factor, so the stop radius does not loosen with M.
  const double volume_floor = initial_log_volume + state.M * std::log(1e-12);

  const std::vector<std::vector<int>> orders =
      lexicographic_orders(sc.K, std::max(1, num_orders));
  std::vector<PowerProfile> inits;
  inits.push_back(default_initial_power(sc));
  if (num_inits >= 2) inits.push_back(PowerProfile::zeros(sc.K, sc.N));
  if (extra_init && is_feasible(*extra_init, sc)) inits.push_back(*extra_init);

  GameOptions inner_opts;
  inner_opts.eps = eps_inner;
  inner_opts.record_updates = false;

  // 2*M^2 cuts shave one e-fold of volume; the factor covers the floor above
  // with feasibility cuts interleaved.
  if (max_steps <= 0) max_steps = 150 * state.M * state.M;
  for (int step = 0; step < max_steps; ++step) {
    // Enforce nu >= 0 with a feasibility cut on the most violated coordinate.
    int worst = -1;
    double worst_value = 0.0;
    for (int i = 0; i < state.M; ++i)
      if (state.center[i] < worst_value) {
        worst_value = state.center[i];
        worst = i;
      }
    bool progressed = true;
    try {
      if (worst >= 0) {
        std::vector<double> cut(state.M, 0.0);
        cut[worst] = -1.0;
        progressed = ellipsoid_step(state, cut);
      } else {
        const std::vector<double>& nu = state.center;
        PowerProfile best_p;
        double best_value = -std::numeric_limits<double>::infinity();
        for (const auto& order : orders) {
          for (const auto& init : inits) {
            GameOptions opts = inner_opts;
            opts.order = order;
            const PowerProfile p = inner_solve(nu, init, sc, opts);
            const double value = lagrangian_value(p, nu, sc);
            if (value > best_value) {
              best_value = value;
              best_p = p;
            }
          }
        }
        result.evaluated_values.push_back(best_value);
        if (best_value < result.bound) {
          result.bound = best_value;
          result.nu = nu;
        }
        progressed = ellipsoid_step(state, dual_subgradient(best_p, sc));
      }
    } catch (const std::runtime_error&) {
      // Numerical collapse of the ellipsoid: keep the best bound found.
      result.collapsed_early = true;
      result.steps = step;
      return result;
    }
    result.steps = step + 1;
    if (!progressed) break;  // zero subgradient, dual optimum reached
    if (ellipsoid_log_volume(state) < volume_floor) break;
  }
  return result;
}

UnderlayResult iadrmpic_run(const Scenario& sc, const PowerProfile& init,
                            const UnderlayOptions& opts) {
  if (!(opts.gamma > 0.0))
    throw std::invalid_argument("iadrmpic_run: gamma must be positive");
  const int m = sc.B * sc.N;
  const std::vector<double> nu_ref = nu_reference_scale(sc);

  UnderlayResult result;
  result.nu.assign(m, 0.0);
  result.power = init;
  std::vector<double> d = dual_subgradient(result.power, sc);
  double lagrangian_prev = lagrangian_value(result.power, result.nu, sc);

  GameOptions inner_opts;
  inner_opts.eps = opts.eps_inner;
  inner_opts.max_rounds = opts.max_inner_rounds;
  inner_opts.order = opts.order;
  inner_opts.record_updates = false;

  double gamma = opts.gamma;
  double best_delta = std::numeric_limits<double>::infinity();
  int stall = 0;

  for (int s = 0; s < opts.max_outer; ++s) {
    // Projected subgradient step; the raw subgradient is normalized by Q to
    // be dimensionless, and scaled per coordinate by the reference price.
    std::vector<double> nu_next(m);
    for (int i = 0; i < m; ++i) {
      const double q = sc.q[i];
      double normalized;
      if (q > 0.0)
        normalized = std::max(d[i] / q, -10.0);  // clamp severe overshoots
      else
        normalized = (d[i] < -1e-18) ? -10.0 : 1.0;
      nu_next[i] = std::max(0.0, result.nu[i] - gamma * nu_ref[i] * normalized);
      // Geometric drain when the constraint has real slack: the additive step
      // is far too slow to unwind a large overshoot of the price.
      if (q > 0.0 && d[i] > opts.slack_tol * q)
        nu_next[i] = std::min(nu_next[i], 0.5 * result.nu[i]);
    }

    const PowerProfile p_next = inner_solve(nu_next, result.power, sc, inner_opts);
    const double lagrangian_next = lagrangian_value(p_next, nu_next, sc);

    // Subgradient-style inequality from the warm-started inner dynamics.
    double rhs = lagrangian_prev;
    for (int i = 0; i < m; ++i) rhs += d[i] * (nu_next[i] - result.nu[i]);
    result.max_subgradient_violation =
        std::max(result.max_subgradient_violation, rhs - lagrangian_next);

    double delta = 0.0;
    for (int k = 0; k < sc.K; ++k) {
      double norm = 0.0;
      for (int n = 0; n < sc.N; ++n) {
        const double diff = p_next.at(k, n) - result.power.at(k, n);
        norm += diff * diff;
      }
      delta = std::max(delta, std::sqrt(norm));
    }

    result.nu = nu_next;
    result.power = p_next;
    d = dual_subgradient(result.power, sc);
    lagrangian_prev = lagrangian_next;
    result.interference = interference_at_enbs(result.power, sc);

    double ratio = 0.0;
    for (int i = 0; i < m; ++i) {
      if (sc.q[i] > 0.0)
        ratio = std::max(ratio, result.interference[i] / sc.q[i]);
      else if (result.interference[i] > 1e-18)
        ratio = std::numeric_limits<double>::infinity();
    }

    double nu_min = nu_next.empty() ? 0.0 : nu_next[0];
    double nu_max = nu_min, nu_sum = 0.0;
    for (double v : nu_next) {
      nu_min = std::min(nu_min, v);
      nu_max = std::max(nu_max, v);
      nu_sum += v;
    }
    result.trace.push_back({s, nu_min, nu_max, m ? nu_sum / m : 0.0,
                            sum_rate(result.power, sc), lagrangian_next, ratio,
                            delta, gamma});
    result.outer_iterations = s + 1;

    // Accept only near-complementary points: a positive price on a
    // constraint with real slack means the iterate is still suppressed.
    bool complementary = true;
    for (int i = 0; i < m; ++i)
      if (sc.q[i] > 0.0 && result.nu[i] > 1e-9 * nu_ref[i] &&
          result.interference[i] < (1.0 - opts.slack_tol) * sc.q[i])
        complementary = false;
    if (delta < opts.eps_outer && ratio <= 1.0 + opts.slack_tol &&
        complementary) {
      result.converged = true;
      break;
    }
    // Halve the step when the power iterate stops improving (oscillation
    // around the active constraints).
    if (delta < 0.9 * best_delta) {
      best_delta = delta;
      stall = 0;
    } else if (++stall >= 10) {
      gamma *= 0.5;
      stall = 0;
    }
  }

  result.primal_value = sum_rate(result.power, sc);
  result.interference = interference_at_enbs(result.power, sc);
  return result;
}

}  // namespace d2d
