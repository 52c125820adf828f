#pragma once

#include <vector>

#include "d2d/scenario.hpp"

namespace d2d {

struct RateReport {
  std::vector<double> per_user_rate;        // bits/s/Hz summed over subcarriers
  double sum_rate = 0.0;
  std::vector<double> per_subcarrier_sinr;  // K*N
};

// i_{k,n}: interference-plus-noise at rx k normalized by the direct gain.
// Strictly positive because sigma2 > 0.
double normalized_interference(int k, int n, const PowerProfile& p,
                               const Scenario& sc);

double user_rate(int k, const PowerProfile& p, const Scenario& sc);
double sum_rate(const PowerProfile& p, const Scenario& sc);
RateReport rate_report(const PowerProfile& p, const Scenario& sc);

// Linearization gradient: sensitivity of all other users' rates to the power
// of user k, evaluated at the joint profile p (row k is the expansion point).
// Non-positive componentwise.
std::vector<double> alpha(int k, const PowerProfile& p, const Scenario& sc);

// Measurable per-receiver factor; alpha factorizes through it as
// alpha_{k,n} = -sum_{l != k} G_{k,l}^n delta_{l,n}.
std::vector<double> delta(int k, const PowerProfile& p, const Scenario& sc);

// Surrogate objective: own-rate term in x_k, other users' rates frozen at the
// expansion point p0_k, plus the linear penalty alpha(p0)*(x_k - p0_k).
// Equals sum_rate(p with row k = x_k) when x_k == p0_k, and never exceeds it.
double surrogate_rate(int k, const std::vector<double>& x_k,
                      const PowerProfile& p, const std::vector<double>& p0_k,
                      const Scenario& sc);

}  // namespace d2d
