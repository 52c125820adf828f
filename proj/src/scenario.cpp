#include "d2d/scenario.hpp"

#include <algorithm>
#include <cmath>
#include <iostream>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace d2d {

double distance(const Vec2& a, const Vec2& b) {
  return std::hypot(a.x - b.x, a.y - b.y);
}

PowerProfile PowerProfile::zeros(int K, int N) {
  PowerProfile out;
  out.K = K;
  out.N = N;
  out.p.assign(static_cast<std::size_t>(K) * N, 0.0);
  return out;
}

double PowerProfile::row_sum(int k) const {
  double s = 0.0;
  for (int n = 0; n < N; ++n) s += at(k, n);
  return s;
}

bool is_feasible(const PowerProfile& p, const Scenario& sc, double tol) {
  if (p.K != sc.K || p.N != sc.N) return false;
  for (int k = 0; k < sc.K; ++k) {
    for (int n = 0; n < sc.N; ++n) {
      const double v = p.at(k, n);
      if (!(v >= 0.0) || v > sc.mask(k, n) + tol) return false;
    }
    if (p.row_sum(k) > sc.p_budget[k] + tol) return false;
  }
  return true;
}

Scenario Scenario::restricted_to_subcarriers(int count) const {
  if (count < 1 || count > N)
    throw std::invalid_argument("restricted_to_subcarriers: bad count");
  Scenario out;
  out.K = K;
  out.N = count;
  out.B = B;
  out.p_budget = p_budget;
  out.serving_cell = serving_cell;
  out.g.resize(static_cast<std::size_t>(K) * K * count);
  out.a.resize(static_cast<std::size_t>(K) * B * count);
  out.sigma2.resize(static_cast<std::size_t>(K) * count);
  out.p_mask.resize(static_cast<std::size_t>(K) * count);
  out.q.resize(static_cast<std::size_t>(B) * count);
  for (int j = 0; j < K; ++j)
    for (int k = 0; k < K; ++k)
      for (int n = 0; n < count; ++n)
        out.g[(j * K + k) * count + n] = gain(j, k, n);
  for (int k = 0; k < K; ++k)
    for (int b = 0; b < B; ++b)
      for (int n = 0; n < count; ++n)
        out.a[(k * B + b) * count + n] = enb_gain(k, b, n);
  for (int k = 0; k < K; ++k)
    for (int n = 0; n < count; ++n) {
      out.sigma2[k * count + n] = noise(k, n);
      out.p_mask[k * count + n] = mask(k, n);
    }
  for (int b = 0; b < B; ++b)
    for (int n = 0; n < count; ++n) out.q[b * count + n] = threshold(b, n);
  return out;
}

bool point_in_hexagon(const Vec2& p, const Vec2& center, double radius) {
  // Flat-top hexagon, center-to-vertex distance = radius.
  const double x = std::fabs(p.x - center.x);
  const double y = std::fabs(p.y - center.y);
  const double h = std::sqrt(3.0) / 2.0 * radius;
  if (y > h + 1e-12) return false;
  return std::sqrt(3.0) * x + y <= std::sqrt(3.0) * radius + 1e-9;
}

std::vector<Vec2> hex_lattice(int num_cells, double radius) {
  // Spiral outward from the center; neighbor centers at sqrt(3)*R, first
  // neighbor direction 30 degrees. The first three entries are mutually
  // adjacent, the first seven are center plus first ring.
  std::vector<Vec2> centers;
  centers.push_back({0.0, 0.0});
  const double d = std::sqrt(3.0) * radius;
  int ring = 1;
  while (static_cast<int>(centers.size()) < num_cells) {
    // Start of ring: step 'ring' times along the 30-degree direction,
    // then walk the six sides.
    Vec2 pos{ring * d * std::cos(M_PI / 6.0), ring * d * std::sin(M_PI / 6.0)};
    for (int side = 0; side < 6; ++side) {
      const double ang = M_PI / 6.0 + (side + 2) * M_PI / 3.0;
      for (int step = 0; step < ring; ++step) {
        centers.push_back(pos);
        if (static_cast<int>(centers.size()) >= num_cells) return centers;
        pos.x += d * std::cos(ang);
        pos.y += d * std::sin(ang);
      }
    }
    ++ring;
  }
  return centers;
}

namespace {

Vec2 uniform_point_in_hexagon(const Vec2& center, double radius, Rng& rng) {
  const double h = std::sqrt(3.0) / 2.0 * radius;
  for (;;) {
    Vec2 p{rng.uniform(center.x - radius, center.x + radius),
           rng.uniform(center.y - h, center.y + h)};
    if (point_in_hexagon(p, center, radius)) return p;
  }
}

int nearest_cell(const Vec2& p, const std::vector<Vec2>& centers) {
  int best = 0;
  double best_d = std::numeric_limits<double>::infinity();
  for (std::size_t b = 0; b < centers.size(); ++b) {
    const double d = distance(p, centers[b]);
    if (d < best_d) {
      best_d = d;
      best = static_cast<int>(b);
    }
  }
  return best;
}

bool inside_any_cell(const Vec2& p, const std::vector<Vec2>& centers,
                     double radius) {
  for (const auto& c : centers)
    if (point_in_hexagon(p, c, radius)) return true;
  return false;
}

}  // namespace

Topology generate_topology(const TopologyParams& params, Rng& rng) {
  if (params.num_cells < 1 || params.cell_radius_m <= 0.0 ||
      params.pairs_per_cell < 0 || params.d2d_max_distance_m < 0.0 ||
      params.min_distance_m <= 0.0 || params.ues_per_cell < 0)
    throw std::invalid_argument("generate_topology: invalid geometry parameters");

  Topology topo;
  topo.cell_radius_m = params.cell_radius_m;
  topo.enb_positions = hex_lattice(params.num_cells, params.cell_radius_m);

  for (int b = 0; b < params.num_cells; ++b) {
    for (int i = 0; i < params.pairs_per_cell; ++i) {
      D2dPair pair;
      pair.tx = uniform_point_in_hexagon(topo.enb_positions[b],
                                         params.cell_radius_m, rng);
      // tx-rx distance uniform in [0, D_max]; resample the rx if it falls
      // outside every cell.
      for (;;) {
        const double dist = rng.uniform(0.0, params.d2d_max_distance_m);
        const double ang = rng.uniform(0.0, 2.0 * M_PI);
        pair.rx = {pair.tx.x + dist * std::cos(ang),
                   pair.tx.y + dist * std::sin(ang)};
        if (params.d2d_max_distance_m == 0.0 ||
            inside_any_cell(pair.rx, topo.enb_positions, params.cell_radius_m))
          break;
      }
      pair.serving_cell = nearest_cell(pair.tx, topo.enb_positions);
      topo.pairs.push_back(pair);
    }
    for (int i = 0; i < params.ues_per_cell; ++i)
      topo.ue_positions.push_back(uniform_point_in_hexagon(
          topo.enb_positions[b], params.cell_radius_m, rng));
  }
  return topo;
}

namespace {

double sample_one_gain(double dist, const ChannelParams& ch, double shadow_db,
                       double fading_factor, double min_distance_m) {
  const double d = std::max(dist, min_distance_m);
  if (d <= 0.0)
    throw std::runtime_error("sample_gains: zero distance after clamping");
  double gain = ch.path_loss_ref_gain * std::pow(d, -ch.path_loss_exponent);
  if (ch.shadowing) gain *= std::pow(10.0, shadow_db / 10.0);
  gain *= fading_factor;
  return gain;
}

}  // namespace

std::vector<double> sample_link_gains(const std::vector<Vec2>& tx,
                                      const std::vector<Vec2>& rx, int n_sub,
                                      const ChannelParams& channel,
                                      double min_distance_m, Rng& rng) {
  std::vector<double> out(tx.size() * rx.size() * n_sub);
  for (std::size_t j = 0; j < tx.size(); ++j) {
    for (std::size_t k = 0; k < rx.size(); ++k) {
      const double dist = distance(tx[j], rx[k]);
      const double shadow_db =
          channel.shadowing ? rng.normal(0.0, channel.shadow_sigma_db) : 0.0;
      for (int n = 0; n < n_sub; ++n) {
        const double fading = channel.fading ? rng.exponential(1.0) : 1.0;
        out[(j * rx.size() + k) * n_sub + n] =
            sample_one_gain(dist, channel, shadow_db, fading, min_distance_m);
      }
    }
  }
  return out;
}

Scenario sample_gains(const Topology& topo, const ChannelParams& channel,
                      const RadioParams& radio, Rng& rng) {
  const int K = static_cast<int>(topo.pairs.size());
  const int B = static_cast<int>(topo.enb_positions.size());
  const int N = radio.num_subcarriers;
  if (N < 1) throw std::invalid_argument("sample_gains: need at least one subcarrier");
  if (radio.noise_w <= 0.0)
    throw std::invalid_argument("sample_gains: noise power must be positive");

  Scenario sc;
  sc.K = K;
  sc.N = N;
  sc.B = B;
  std::vector<Vec2> tx(K), rx(K);
  for (int k = 0; k < K; ++k) {
    tx[k] = topo.pairs[k].tx;
    rx[k] = topo.pairs[k].rx;
    sc.serving_cell.push_back(topo.pairs[k].serving_cell);
  }
  sc.g = sample_link_gains(tx, rx, N, channel, channel.min_distance_m, rng);
  // tx -> eNB links
  sc.a = sample_link_gains(tx, topo.enb_positions, N, channel,
                           channel.min_distance_m, rng);
  sc.sigma2.assign(static_cast<std::size_t>(K) * N, radio.noise_w);
  sc.p_budget.assign(K, radio.power_budget_w);
  sc.q.assign(static_cast<std::size_t>(B) * N, radio.q_max_w);
  sc.p_mask.assign(static_cast<std::size_t>(K) * N, 0.0);
  derive_masks(sc, radio.mask_mode, radio.mask_value_w, radio.mask_cap_w);
  return sc;
}

void derive_masks(Scenario& sc, MaskMode mode, double constant_value_w,
                  double cap_w) {
  if (mode == MaskMode::kConstant) {
    sc.p_mask.assign(static_cast<std::size_t>(sc.K) * sc.N, constant_value_w);
    return;
  }
  sc.p_mask.resize(static_cast<std::size_t>(sc.K) * sc.N);
  int zero_gain_links = 0;
  for (int k = 0; k < sc.K; ++k) {
    const int b = sc.serving_cell[k];
    for (int n = 0; n < sc.N; ++n) {
      const double gain = sc.enb_gain(k, b, n);
      if (gain > 0.0) {
        sc.p_mask[k * sc.N + n] = sc.threshold(b, n) / gain;
      } else {
        sc.p_mask[k * sc.N + n] = cap_w;
        ++zero_gain_links;
      }
    }
  }
  if (zero_gain_links > 0)
    std::cerr << "derive_masks: " << zero_gain_links
              << " zero eNB-gain links, mask set to cap\n";
}

std::string dump_scenario(const Scenario& sc) {
  std::ostringstream os;
  os.precision(17);
  os << sc.K << ' ' << sc.N << ' ' << sc.B << '\n';
  auto emit = [&os](const std::vector<double>& v) {
    for (std::size_t i = 0; i < v.size(); ++i)
      os << v[i] << (i + 1 == v.size() ? '\n' : ' ');
    if (v.empty()) os << '\n';
  };
  emit(sc.g);
  emit(sc.a);
  emit(sc.sigma2);
  emit(sc.p_budget);
  emit(sc.p_mask);
  emit(sc.q);
  for (std::size_t i = 0; i < sc.serving_cell.size(); ++i)
    os << sc.serving_cell[i] << (i + 1 == sc.serving_cell.size() ? '\n' : ' ');
  if (sc.serving_cell.empty()) os << '\n';
  return os.str();
}

Scenario load_scenario(const std::string& text) {
  std::istringstream is(text);
  Scenario sc;
  if (!(is >> sc.K >> sc.N >> sc.B))
    throw std::runtime_error("load_scenario: bad header");
  auto read = [&is](std::vector<double>& v, std::size_t count) {
    v.resize(count);
    for (auto& x : v)
      if (!(is >> x)) throw std::runtime_error("load_scenario: truncated data");
  };
  const std::size_t K = sc.K, N = sc.N, B = sc.B;
  read(sc.g, K * K * N);
  read(sc.a, K * B * N);
  read(sc.sigma2, K * N);
  read(sc.p_budget, K);
  read(sc.p_mask, K * N);
  read(sc.q, B * N);
  sc.serving_cell.resize(K);
  for (auto& c : sc.serving_cell)
    if (!(is >> c)) throw std::runtime_error("load_scenario: truncated data");
  return sc;
}

}  // namespace d2d
