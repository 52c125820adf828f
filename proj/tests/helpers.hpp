#pragma once

#include <vector>

#include "d2d/rng.hpp"
#include "d2d/scenario.hpp"

namespace d2d::testing {

// Random instance with physically plausible magnitudes, built directly from
// gain draws so tests do not depend on the topology generator.
inline Scenario random_scenario(int K, int N, int B, Rng& rng,
                                double q = 1e-13,
                                MaskMode mask_mode = MaskMode::kConstant) {
  Scenario sc;
  sc.K = K;
  sc.N = N;
  sc.B = B;
  sc.g.resize(static_cast<std::size_t>(K) * K * N);
  sc.a.resize(static_cast<std::size_t>(K) * B * N);
  for (int j = 0; j < K; ++j)
    for (int k = 0; k < K; ++k)
      for (int n = 0; n < N; ++n)
        sc.g[(j * K + k) * N + n] =
            rng.exponential(j == k ? 1e-8 : 1e-10);
  for (int k = 0; k < K; ++k)
    for (int b = 0; b < B; ++b)
      for (int n = 0; n < N; ++n)
        sc.a[(k * B + b) * N + n] = rng.exponential(1e-11);
  sc.sigma2.assign(static_cast<std::size_t>(K) * N, 1e-13);
  sc.p_budget.assign(K, 0.25);
  sc.q.assign(static_cast<std::size_t>(B) * N, q);
  sc.serving_cell.resize(K);
  for (int k = 0; k < K; ++k) sc.serving_cell[k] = k % B;
  derive_masks(sc, mask_mode, 0.25, 1e6);
  return sc;
}

inline PowerProfile random_power(const Scenario& sc, Rng& rng) {
  PowerProfile p = PowerProfile::zeros(sc.K, sc.N);
  for (int k = 0; k < sc.K; ++k) {
    double total = 0.0;
    std::vector<double> raw(sc.N);
    for (int n = 0; n < sc.N; ++n) {
      raw[n] = rng.uniform();
      total += raw[n];
    }
    const double scale = rng.uniform() * sc.p_budget[k] / total;
    for (int n = 0; n < sc.N; ++n)
      p.at(k, n) = std::min(raw[n] * scale, sc.mask(k, n));
  }
  return p;
}

}  // namespace d2d::testing
