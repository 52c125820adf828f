#include "d2d/campaign.hpp"

#include <atomic>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <limits>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "d2d/game.hpp"
#include "d2d/underlay.hpp"

namespace d2d {

namespace {

namespace fs = std::filesystem;

// Substream ids for the per-seed draws.
constexpr std::uint64_t kStreamTopology = 0;
constexpr std::uint64_t kStreamGains = 1;
constexpr std::uint64_t kStreamUeLinks = 3;

double max_interference_ratio(const PowerProfile& p, const Scenario& sc) {
  const std::vector<double> interference = interference_at_enbs(p, sc);
  double ratio = 0.0;
  for (std::size_t i = 0; i < interference.size(); ++i) {
    if (sc.q[i] > 0.0)
      ratio = std::max(ratio, interference[i] / sc.q[i]);
    else if (interference[i] > 1e-18)
      ratio = std::numeric_limits<double>::infinity();
  }
  return ratio;
}

std::vector<PowerProfile> multistart_inits(const Scenario& sc, int count) {
  std::vector<PowerProfile> inits;
  inits.push_back(default_initial_power(sc));
  if (count >= 2) inits.push_back(PowerProfile::zeros(sc.K, sc.N));
  return inits;
}

std::string overlay_trace_csv(const IterationTrace& trace) {
  std::ostringstream os;
  os.precision(12);
  os << "round,sum_rate\n";
  for (std::size_t i = 0; i < trace.round_objective.size(); ++i)
    os << i << ',' << trace.round_objective[i] << '\n';
  return os.str();
}

std::string underlay_trace_csv(const UnderlayResult& result) {
  std::ostringstream os;
  os.precision(12);
  os << "step,nu_min,nu_max,nu_mean,primal_value,lagrangian,"
        "max_interference_ratio,power_delta,gamma\n";
  for (const auto& row : result.trace)
    os << row.step << ',' << row.nu_min << ',' << row.nu_max << ','
       << row.nu_mean << ',' << row.primal_value << ',' << row.lagrangian
       << ',' << row.max_interference_ratio << ',' << row.power_delta << ','
       << row.gamma << '\n';
  return os.str();
}

void write_file(const fs::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << content;
}

double mean_of(const std::vector<double>& v) {
  double acc = 0.0;
  for (double x : v) acc += x;
  return v.empty() ? 0.0 : acc / v.size();
}

double std_of(const std::vector<double>& v) {
  if (v.size() < 2) return 0.0;
  const double m = mean_of(v);
  double acc = 0.0;
  for (double x : v) acc += (x - m) * (x - m);
  return std::sqrt(acc / (v.size() - 1));
}

}  // namespace

Scenario make_scenario(const TopologyParams& topology,
                       const ChannelParams& channel, const RadioParams& radio,
                       std::uint64_t seed) {
  Rng topo_rng = Rng::substream(seed, kStreamTopology);
  const Topology topo = generate_topology(topology, topo_rng);
  Rng gain_rng = Rng::substream(seed, kStreamGains);
  return sample_gains(topo, channel, radio, gain_rng);
}

SummaryRow run_single(RunMode mode, const Scenario& sc,
                      const ExperimentConfig& config, std::uint64_t seed,
                      std::string* trace_csv) {
  SummaryRow row;
  row.seed = seed;
  row.mode = mode_name(mode);
  row.cells = sc.B;
  row.power_budget = sc.p_budget.empty() ? 0.0 : sc.p_budget[0];
  row.q_max = sc.q.empty() ? 0.0 : sc.q[0];

  const auto start = std::chrono::steady_clock::now();
  GameOptions game_opts;
  game_opts.eps = config.eps;
  game_opts.max_rounds = config.max_rounds;

  switch (mode) {
    case RunMode::kOverlayIadrmp:
    case RunMode::kOverlayIwf:
    case RunMode::kOverlayMultistart: {
      AllocationResult result;
      if (mode == RunMode::kOverlayIadrmp)
        result = iadrmp_run(sc, default_initial_power(sc), game_opts);
      else if (mode == RunMode::kOverlayIwf)
        result = iwf_run(sc, default_initial_power(sc), game_opts);
      else
        result = multistart_run(
            sc, lexicographic_orders(sc.K, config.multistart_orders),
            multistart_inits(sc, config.multistart_inits), game_opts);
      row.sum_rate = result.rates.sum_rate;
      row.rounds = result.trace.rounds_to_converge;
      row.nash_gap = result.nash_gap;
      row.converged = result.converged;
      row.max_interference_ratio = max_interference_ratio(result.power, sc);
      if (trace_csv) *trace_csv = overlay_trace_csv(result.trace);
      break;
    }
    case RunMode::kUnderlayIadrmpic:
    case RunMode::kUnderlayUpperBound: {
      UnderlayOptions opts;
      opts.gamma = config.gamma;
      opts.eps_inner = config.eps;
      opts.eps_outer = config.eps_outer;
      opts.max_outer = config.max_outer;
      opts.slack_tol = config.slack_tol;
      opts.max_inner_rounds = config.max_rounds;
      const UnderlayResult result =
          iadrmpic_run(sc, default_initial_power(sc), opts);
      row.sum_rate = result.primal_value;
      row.rounds = result.outer_iterations;
      row.converged = result.converged;
      row.max_interference_ratio = max_interference_ratio(result.power, sc);
      row.nash_gap = nash_check(result.power, sc, &result.nu);
      if (trace_csv) *trace_csv = underlay_trace_csv(result);
      if (mode == RunMode::kUnderlayUpperBound) {
        const PowerProfile feasible_primal =
            scale_into_feasibility(result.power, sc);
        const DualBoundResult dual = dual_upper_bound(
            sc, config.multistart_orders, config.multistart_inits, config.eps,
            config.dual_max_steps, &feasible_primal);
        row.dual_bound = dual.bound;
        if (trace_csv) {
          std::ostringstream os;
          os.precision(12);
          os << "step,dual_value\n";
          for (std::size_t i = 0; i < dual.evaluated_values.size(); ++i)
            os << i << ',' << dual.evaluated_values[i] << '\n';
          *trace_csv += os.str();
        }
      }
      break;
    }
    case RunMode::kModeComparison:
      throw std::invalid_argument("run_single: mode-comparison is a campaign-level mode");
  }

  row.eta_per_cell = row.sum_rate / sc.B / sc.N;
  row.wall_time_s =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
          .count();
  return row;
}

std::string summary_csv(const std::vector<SummaryRow>& rows) {
  std::ostringstream os;
  os.precision(12);
  os << "seed,mode,cells,power_budget,q_max,sum_rate,eta_per_cell,rounds,"
        "nash_gap,max_interference_ratio,dual_bound,converged,error,"
        "wall_time_s\n";
  for (const auto& r : rows)
    os << r.seed << ',' << r.mode << ',' << r.cells << ',' << r.power_budget
       << ',' << r.q_max << ',' << r.sum_rate << ',' << r.eta_per_cell << ','
       << r.rounds << ',' << r.nash_gap << ',' << r.max_interference_ratio
       << ',' << r.dual_bound << ',' << (r.converged ? 1 : 0) << ','
       << r.error << ',' << r.wall_time_s << '\n';
  return os.str();
}

namespace {

struct Task {
  std::uint64_t seed = 0;
  RunMode mode = RunMode::kOverlayIadrmp;
  double power_budget = 0.0;
  double q_max = 0.0;
  int sweep_p = -1;  // sweep indices, -1 when no sweep
  int sweep_q = -1;
};

std::string trace_filename(const Task& task) {
  std::ostringstream os;
  os << "trace_" << task.seed << '_' << mode_name(task.mode);
  if (task.sweep_p >= 0) os << "_p" << task.sweep_p;
  if (task.sweep_q >= 0) os << "_q" << task.sweep_q;
  os << ".csv";
  return os.str();
}

}  // namespace

CampaignResult run_campaign(const ExperimentConfig& config) {
  CampaignResult result;
  fs::create_directories(config.output_dir);
  write_file(fs::path(config.output_dir) / "manifest", config_manifest(config));

  if (config.modes.size() == 1 && config.modes[0] == RunMode::kModeComparison) {
    result.comparison = mode_comparison(config);
    return result;
  }

  const std::vector<double> p_points =
      config.power_sweep.empty() ? std::vector<double>{config.radio.power_budget_w}
                                 : config.power_sweep;
  const std::vector<double> q_points =
      config.q_sweep.empty() ? std::vector<double>{config.radio.q_max_w}
                             : config.q_sweep;
  const bool sweeping = !config.power_sweep.empty() || !config.q_sweep.empty();

  std::vector<Task> tasks;
  for (std::size_t pi = 0; pi < p_points.size(); ++pi)
    for (std::size_t qi = 0; qi < q_points.size(); ++qi)
      for (std::uint64_t seed : config.seeds)
        for (RunMode mode : config.modes)
          tasks.push_back({seed, mode, p_points[pi], q_points[qi],
                           sweeping ? static_cast<int>(pi) : -1,
                           sweeping ? static_cast<int>(qi) : -1});

  std::vector<SummaryRow> rows(tasks.size());
  std::vector<std::string> traces(tasks.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&]() {
    for (;;) {
      const std::size_t i = next.fetch_add(1);
      if (i >= tasks.size()) return;
      const Task& task = tasks[i];
      RadioParams radio = config.radio;
      radio.power_budget_w = task.power_budget;
      radio.q_max_w = task.q_max;
      try {
        const Scenario sc =
            make_scenario(config.topology, config.channel, radio, task.seed);
        rows[i] = run_single(task.mode, sc, config, task.seed, &traces[i]);
      } catch (const std::exception& e) {
        rows[i].seed = task.seed;
        rows[i].mode = mode_name(task.mode);
        rows[i].cells = config.topology.num_cells;
        rows[i].power_budget = task.power_budget;
        rows[i].q_max = task.q_max;
        rows[i].error = e.what();
      }
    }
  };
  const int n_threads =
      std::min<std::size_t>(std::max(1, config.workers), tasks.size());
  std::vector<std::thread> pool;
  for (int t = 0; t < n_threads; ++t) pool.emplace_back(worker);
  for (auto& t : pool) t.join();

  // Serialize outputs in task order regardless of worker scheduling.
  for (std::size_t i = 0; i < tasks.size(); ++i) {
    if (!rows[i].error.empty()) {
      ++result.failures;
      continue;
    }
    write_file(fs::path(config.output_dir) / trace_filename(tasks[i]), traces[i]);
  }
  result.rows = rows;
  write_file(fs::path(config.output_dir) / "summary.csv", summary_csv(rows));

  // Aggregate statistics per (mode, sweep point).
  std::ostringstream agg;
  agg.precision(12);
  agg << "mode,power_budget,q_max,count,sum_rate_mean,sum_rate_std,"
         "sum_rate_min,sum_rate_max,eta_mean\n";
  for (RunMode mode : config.modes)
    for (double p : p_points)
      for (double q : q_points) {
        std::vector<double> values, etas;
        for (const auto& r : rows)
          if (r.error.empty() && r.mode == mode_name(mode) &&
              r.power_budget == p && r.q_max == q) {
            values.push_back(r.sum_rate);
            etas.push_back(r.eta_per_cell);
          }
        if (values.empty()) continue;
        double lo = values[0], hi = values[0];
        for (double v : values) {
          lo = std::min(lo, v);
          hi = std::max(hi, v);
        }
        agg << mode_name(mode) << ',' << p << ',' << q << ',' << values.size()
            << ',' << mean_of(values) << ',' << std_of(values) << ',' << lo
            << ',' << hi << ',' << mean_of(etas) << '\n';
      }
  write_file(fs::path(config.output_dir) / "aggregate.csv", agg.str());
  return result;
}

std::vector<ComparisonRow> mode_comparison(const ExperimentConfig& config) {
  if (config.n_dedicated_list.size() != config.q_max_list.size())
    throw std::invalid_argument("mode_comparison: q_max_list must pair with n_dedicated_list");
  for (int nd : config.n_dedicated_list)
    if (nd >= config.radio.num_subcarriers)
      throw std::invalid_argument("mode_comparison: n_dedicated must be < subcarriers");

  std::vector<ComparisonRow> out;
  for (double d_max : config.d_max_list) {
    TopologyParams topology = config.topology;
    topology.d2d_max_distance_m = d_max;
    for (std::size_t si = 0; si < config.n_dedicated_list.size(); ++si) {
      const int n_dedicated = config.n_dedicated_list[si];
      const double q_max = config.q_max_list[si];
      std::vector<double> eta_dedicated, eta_reuse;
      for (std::uint64_t seed : config.seeds) {
        Rng topo_rng = Rng::substream(seed, kStreamTopology);
        const Topology topo = generate_topology(topology, topo_rng);

        RadioParams radio = config.radio;
        radio.q_max_w = q_max;
        radio.mask_mode = MaskMode::kInterferenceDerived;
        Rng gain_rng = Rng::substream(seed, kStreamGains);
        Scenario reuse_sc = sample_gains(topo, config.channel, radio, gain_rng);

        // Cellular uplink interference on the shared band: each UE gets an
        // equal share of the subcarriers of its cell and splits its budget
        // evenly over them (waterfilling against a flat noise floor).
        if (!topo.ue_positions.empty()) {
          std::vector<Vec2> rx(reuse_sc.K);
          for (int k = 0; k < reuse_sc.K; ++k) rx[k] = topo.pairs[k].rx;
          Rng ue_rng = Rng::substream(seed, kStreamUeLinks);
          const std::vector<double> ue_gains = sample_link_gains(
              topo.ue_positions, rx, reuse_sc.N, config.channel,
              config.channel.min_distance_m, ue_rng);
          const int ues_per_cell = config.topology.ues_per_cell;
          for (std::size_t u = 0; u < topo.ue_positions.size(); ++u) {
            const int slot = static_cast<int>(u) % ues_per_cell;
            int carriers = 0;
            for (int n = slot; n < reuse_sc.N; n += ues_per_cell) ++carriers;
            if (carriers == 0) continue;
            const double ue_power = config.ue_power_budget_w / carriers;
            for (int n = slot; n < reuse_sc.N; n += ues_per_cell)
              for (int k = 0; k < reuse_sc.K; ++k)
                reuse_sc.sigma2[k * reuse_sc.N + n] +=
                    ue_gains[(u * reuse_sc.K + k) * reuse_sc.N + n] * ue_power;
          }
        }

        // Dedicated branch: same channel draw, the first n_dedicated
        // subcarriers are exclusive to D2D; no eNB interference constraint,
        // so the mask is the configured constant (budget by default).
        Scenario dedicated_sc = reuse_sc;
        dedicated_sc.sigma2.assign(dedicated_sc.sigma2.size(),
                                   config.radio.noise_w);
        const double dedicated_mask =
            config.radio.mask_mode == MaskMode::kConstant
                ? config.radio.mask_value_w
                : config.radio.power_budget_w;
        derive_masks(dedicated_sc, MaskMode::kConstant, dedicated_mask, 0.0);
        dedicated_sc = dedicated_sc.restricted_to_subcarriers(n_dedicated);

        GameOptions game_opts;
        game_opts.eps = config.eps;
        game_opts.max_rounds = config.max_rounds;
        game_opts.record_updates = false;
        const AllocationResult dedicated =
            iadrmp_run(dedicated_sc, default_initial_power(dedicated_sc), game_opts);

        UnderlayOptions underlay_opts;
        underlay_opts.gamma = config.gamma;
        underlay_opts.eps_inner = config.eps;
        underlay_opts.eps_outer = config.eps_outer;
        underlay_opts.max_outer = config.max_outer;
        underlay_opts.slack_tol = config.slack_tol;
        underlay_opts.max_inner_rounds = config.max_rounds;
        const UnderlayResult reuse =
            iadrmpic_run(reuse_sc, default_initial_power(reuse_sc), underlay_opts);

        // Both normalized by the whole system bandwidth.
        const double norm = static_cast<double>(reuse_sc.B) * reuse_sc.N;
        eta_dedicated.push_back(dedicated.rates.sum_rate / norm);
        eta_reuse.push_back(reuse.primal_value / norm);
      }
      out.push_back({d_max, n_dedicated, q_max, "dedicated",
                     mean_of(eta_dedicated), std_of(eta_dedicated),
                     static_cast<int>(eta_dedicated.size())});
      out.push_back({d_max, n_dedicated, q_max, "reuse", mean_of(eta_reuse),
                     std_of(eta_reuse), static_cast<int>(eta_reuse.size())});
    }
  }

  std::ostringstream os;
  os.precision(12);
  os << "d_max,n_dedicated,q_max,mode,eta_mean,eta_std,num_seeds\n";
  for (const auto& r : out)
    os << r.d_max << ',' << r.n_dedicated << ',' << r.q_max << ',' << r.mode
       << ',' << r.eta_mean << ',' << r.eta_std << ',' << r.num_seeds << '\n';
  fs::create_directories(config.output_dir);
  write_file(fs::path(config.output_dir) / "comparison.csv", os.str());
  return out;
}

}  // namespace d2d
