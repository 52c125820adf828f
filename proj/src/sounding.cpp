#include "d2d/sounding.hpp"

#include <stdexcept>

#include "d2d/rate_model.hpp"

namespace d2d {

SoundingFrame build_frame(const PowerProfile& p, const std::vector<double>* nu,
                          const Scenario& sc, double p0) {
  if (!(p0 > 0.0)) throw std::invalid_argument("build_frame: p0 must be positive");
  SoundingFrame frame;
  frame.p0 = p0;
  frame.rx_broadcast.assign(static_cast<std::size_t>(sc.K) * sc.N, 0.0);
  frame.enb_broadcast.assign(static_cast<std::size_t>(sc.B) * sc.N, 0.0);
  for (int l = 0; l < sc.K; ++l) {
    const std::vector<double> d = delta(l, p, sc);
    for (int n = 0; n < sc.N; ++n) frame.rx_broadcast[l * sc.N + n] = d[n] * p0;
  }
  if (nu) {
    if (nu->size() != frame.enb_broadcast.size())
      throw std::invalid_argument("build_frame: nu size mismatch");
    for (std::size_t i = 0; i < nu->size(); ++i)
      frame.enb_broadcast[i] = (*nu)[i] * p0;
  }
  return frame;
}

std::vector<double> measure_and_estimate(int k, const SoundingFrame& frame,
                                         const Scenario& sc) {
  std::vector<double> estimate(sc.N, 0.0);
  for (int n = 0; n < sc.N; ++n) {
    double rx_power = 0.0;
    for (int l = 0; l < sc.K; ++l)
      rx_power += sc.gain(k, l, n) * frame.rx_broadcast[l * sc.N + n];
    // subtract the own-link contribution, known through the dedicated
    // control channel with the k-th receiver
    rx_power -= sc.gain(k, k, n) * frame.rx_broadcast[k * sc.N + n];
    double enb_power = 0.0;
    for (int b = 0; b < sc.B; ++b)
      enb_power += sc.enb_gain(k, b, n) * frame.enb_broadcast[b * sc.N + n];
    estimate[n] = -(rx_power + enb_power) / frame.p0;
  }
  return estimate;
}

}  // namespace d2d
