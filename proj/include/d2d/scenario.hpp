#pragma once

#include <string>
#include <vector>

#include "d2d/rng.hpp"

namespace d2d {

struct Vec2 {
  double x = 0.0;
  double y = 0.0;
};

double distance(const Vec2& a, const Vec2& b);

struct TopologyParams {
  int num_cells = 1;                // B
  double cell_radius_m = 500.0;     // center-to-vertex radius R
  int pairs_per_cell = 8;
  double d2d_max_distance_m = 100.0;  // D_max
  double min_distance_m = 1.0;        // d_min, path-loss clamp
  int ues_per_cell = 0;               // cellular terminals, mode-comparison only
};

struct ChannelParams {
  double path_loss_exponent = 4.0;
  double path_loss_ref_gain = 1.0;  // gain at 1 m
  double shadow_sigma_db = 8.0;
  bool shadowing = true;
  bool fading = true;
  double min_distance_m = 1.0;  // d_min clamp before the path-loss power law
};

enum class MaskMode { kInterferenceDerived, kConstant };

struct RadioParams {
  int num_subcarriers = 8;      // N
  double noise_w = 1e-13;       // sigma^2, same for every receiver/subcarrier
  double power_budget_w = 0.25; // P_k
  MaskMode mask_mode = MaskMode::kInterferenceDerived;
  double mask_value_w = 0.25;   // constant-mode cap
  double q_max_w = 1e-13;       // interference threshold per (cell, subcarrier)
  double mask_cap_w = 1e6;      // substitute when the tx->eNB gain is zero
};

struct D2dPair {
  Vec2 tx;
  Vec2 rx;
  int serving_cell = 0;  // nearest eNB to the tx node
};

struct Topology {
  double cell_radius_m = 0.0;
  std::vector<Vec2> enb_positions;
  std::vector<D2dPair> pairs;
  std::vector<Vec2> ue_positions;  // empty unless requested
};

// Immutable problem instance. Tensors are flat row-major:
//   g[(j*K + k)*N + n]  power gain, tx of couple j -> rx of couple k
//   a[(k*B + b)*N + n]  power gain, tx of couple k -> eNB b
struct Scenario {
  int K = 0;
  int N = 0;
  int B = 0;
  std::vector<double> g;
  std::vector<double> a;
  std::vector<double> sigma2;    // K*N noise-plus-cellular-interference power
  std::vector<double> p_budget;  // K
  std::vector<double> p_mask;    // K*N
  std::vector<double> q;         // B*N
  std::vector<int> serving_cell; // K

  double gain(int j, int k, int n) const { return g[(j * K + k) * N + n]; }
  double enb_gain(int k, int b, int n) const { return a[(k * B + b) * N + n]; }
  double noise(int k, int n) const { return sigma2[k * N + n]; }
  double mask(int k, int n) const { return p_mask[k * N + n]; }
  double threshold(int b, int n) const { return q[b * N + n]; }

  // Slice keeping subcarriers [0, count); budgets unchanged. Used by the
  // dedicated-mode branch of the mode comparison.
  Scenario restricted_to_subcarriers(int count) const;
};

struct PowerProfile {
  int K = 0;
  int N = 0;
  std::vector<double> p;  // K*N, Watts

  static PowerProfile zeros(int K, int N);
  double at(int k, int n) const { return p[k * N + n]; }
  double& at(int k, int n) { return p[k * N + n]; }
  double row_sum(int k) const;
};

bool is_feasible(const PowerProfile& p, const Scenario& sc, double tol = 1e-9);

// Hex lattice centers for the requested number of cells: central cell first,
// then rings outward, neighbor spacing sqrt(3)*R.
std::vector<Vec2> hex_lattice(int num_cells, double radius);

bool point_in_hexagon(const Vec2& p, const Vec2& center, double radius);

Topology generate_topology(const TopologyParams& params, Rng& rng);

// Path loss C*d^-alpha, log-normal shadowing shared across subcarriers per
// link, unit-mean exponential fading per (link, subcarrier).
Scenario sample_gains(const Topology& topo, const ChannelParams& channel,
                      const RadioParams& radio, Rng& rng);

// Generic link-gain sampler for extra interference sources (UE -> D2D rx).
// Returns |tx| x |rx| x N flat row-major gains.
std::vector<double> sample_link_gains(const std::vector<Vec2>& tx,
                                      const std::vector<Vec2>& rx, int n_sub,
                                      const ChannelParams& channel,
                                      double min_distance_m, Rng& rng);

void derive_masks(Scenario& sc, MaskMode mode, double constant_value_w,
                  double cap_w);

// Plain-text matrix dump for cross-implementation comparison:
// header "K N B", then G, A, sigma2, P_budget, P_mask, Q, serving_cell,
// row-major, one value per token.
std::string dump_scenario(const Scenario& sc);
Scenario load_scenario(const std::string& text);

}  // namespace d2d
