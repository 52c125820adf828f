#include "d2d/rate_model.hpp"

#include <cmath>

namespace d2d {

namespace {

constexpr double kLn2 = 0.69314718055994530942;

// Interference-plus-noise at rx l excluding the contributions of users k and
// l themselves (un-normalized, Watts).
double raw_interference_excluding(int l, int k, int n, const PowerProfile& p,
                                  const Scenario& sc) {
  double acc = sc.noise(l, n);
  for (int j = 0; j < sc.K; ++j) {
    if (j == l || j == k) continue;
    acc += sc.gain(j, l, n) * p.at(j, n);
  }
  return acc;
}

}  // namespace

double normalized_interference(int k, int n, const PowerProfile& p,
                               const Scenario& sc) {
  double acc = sc.noise(k, n);
  for (int j = 0; j < sc.K; ++j) {
    if (j == k) continue;
    acc += sc.gain(j, k, n) * p.at(j, n);
  }
  return acc / sc.gain(k, k, n);
}

double user_rate(int k, const PowerProfile& p, const Scenario& sc) {
  double rate = 0.0;
  for (int n = 0; n < sc.N; ++n)
    rate += std::log2(1.0 + p.at(k, n) / normalized_interference(k, n, p, sc));
  return rate;
}

double sum_rate(const PowerProfile& p, const Scenario& sc) {
  double acc = 0.0;
  for (int k = 0; k < sc.K; ++k) acc += user_rate(k, p, sc);
  return acc;
}

RateReport rate_report(const PowerProfile& p, const Scenario& sc) {
  RateReport report;
  report.per_user_rate.resize(sc.K);
  report.per_subcarrier_sinr.assign(static_cast<std::size_t>(sc.K) * sc.N, 0.0);
  for (int k = 0; k < sc.K; ++k) {
    double rate = 0.0;
    for (int n = 0; n < sc.N; ++n) {
      const double sinr =
          p.at(k, n) / normalized_interference(k, n, p, sc);
      report.per_subcarrier_sinr[k * sc.N + n] = sinr;
      rate += std::log2(1.0 + sinr);
    }
    report.per_user_rate[k] = rate;
    report.sum_rate += rate;
  }
  return report;
}

std::vector<double> alpha(int k, const PowerProfile& p, const Scenario& sc) {
  std::vector<double> out(sc.N, 0.0);
  for (int n = 0; n < sc.N; ++n) {
    double acc = 0.0;
    for (int l = 0; l < sc.K; ++l) {
      if (l == k) continue;
      const double cross = sc.gain(k, l, n);      // tx k -> rx l
      const double direct = sc.gain(l, l, n);
      const double p_l = p.at(l, n);
      if (cross == 0.0 || p_l == 0.0) continue;
      const double base = raw_interference_excluding(l, k, n, p, sc) +
                          cross * p.at(k, n);
      acc += direct * cross * p_l / (kLn2 * base * (base + direct * p_l));
    }
    out[n] = -acc;
  }
  return out;
}

std::vector<double> delta(int k, const PowerProfile& p, const Scenario& sc) {
  std::vector<double> out(sc.N, 0.0);
  for (int n = 0; n < sc.N; ++n) {
    double interf = sc.noise(k, n);
    for (int j = 0; j < sc.K; ++j) {
      if (j == k) continue;
      interf += sc.gain(j, k, n) * p.at(j, n);
    }
    const double own = sc.gain(k, k, n) * p.at(k, n);
    out[n] = own / (kLn2 * interf * (interf + own));
  }
  return out;
}

double surrogate_rate(int k, const std::vector<double>& x_k,
                      const PowerProfile& p, const std::vector<double>& p0_k,
                      const Scenario& sc) {
  PowerProfile at0 = p;
  for (int n = 0; n < sc.N; ++n) at0.at(k, n) = p0_k[n];

  double value = 0.0;
  // a) own rate in the free variable
  for (int n = 0; n < sc.N; ++n)
    value += std::log2(1.0 + x_k[n] / normalized_interference(k, n, at0, sc));
  // b) other users' rates frozen at the expansion point
  for (int l = 0; l < sc.K; ++l) {
    if (l == k) continue;
    for (int n = 0; n < sc.N; ++n) {
      const double base = raw_interference_excluding(l, k, n, at0, sc) +
                          sc.gain(k, l, n) * p0_k[n];
      value += std::log2(1.0 + sc.gain(l, l, n) * at0.at(l, n) / base);
    }
  }
  // linear penalty
  const std::vector<double> grad = alpha(k, at0, sc);
  for (int n = 0; n < sc.N; ++n) value += grad[n] * (x_k[n] - p0_k[n]);
  return value;
}

}  // namespace d2d
