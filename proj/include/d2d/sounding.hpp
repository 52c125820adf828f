#pragma once

#include <vector>

#include "d2d/scenario.hpp"

namespace d2d {

// Measurement-based distributed estimation of the penalty coefficients:
// receivers broadcast delta-scaled sounding power, eNBs broadcast nu-scaled
// sounding power, and each transmitter reconstructs its penalty from the
// aggregate received power on each subcarrier. The two broadcast classes use
// separate sounding resources and are measured independently.
struct SoundingFrame {
  double p0 = 1.0;                   // reference power factor, W
  std::vector<double> rx_broadcast;  // K*N, delta_{l,n} * p0
  std::vector<double> enb_broadcast; // B*N, nu_{b,n} * p0
};

// nu may be null (overlay: eNB broadcasts are zero).
SoundingFrame build_frame(const PowerProfile& p, const std::vector<double>* nu,
                          const Scenario& sc, double p0);

// Aggregate power measured at tx k, own-link term subtracted, scaled back by
// p0. Reproduces alpha_{k,n} - sum_b nu_{b,n} A^n_{k,b} exactly in the
// noiseless model (TDD reciprocity: tx k hears rx l through G_{k,l}).
std::vector<double> measure_and_estimate(int k, const SoundingFrame& frame,
                                         const Scenario& sc);

}  // namespace d2d
