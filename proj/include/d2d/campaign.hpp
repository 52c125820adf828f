#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "d2d/config.hpp"
#include "d2d/scenario.hpp"

namespace d2d {

// summary.csv columns, in order:
//   seed,mode,cells,power_budget,q_max,sum_rate,eta_per_cell,rounds,
//   nash_gap,max_interference_ratio,dual_bound,converged,error,wall_time_s
// eta_per_cell = sum rate per cell divided by the total subcarrier count.
// wall_time_s is the only non-deterministic column.
struct SummaryRow {
  std::uint64_t seed = 0;
  std::string mode;
  int cells = 0;
  double power_budget = 0.0;
  double q_max = 0.0;
  double sum_rate = 0.0;
  double eta_per_cell = 0.0;
  int rounds = 0;
  double nash_gap = 0.0;
  double max_interference_ratio = 0.0;
  double dual_bound = 0.0;  // underlay-ub only, else 0
  bool converged = false;
  std::string error;  // empty on success
  double wall_time_s = 0.0;
};

struct ComparisonRow {
  double d_max = 0.0;
  int n_dedicated = 0;
  double q_max = 0.0;
  std::string mode;  // "dedicated" or "reuse"
  double eta_mean = 0.0;
  double eta_std = 0.0;
  int num_seeds = 0;
};

struct CampaignResult {
  std::vector<SummaryRow> rows;
  std::vector<ComparisonRow> comparison;  // mode-comparison only
  int failures = 0;
};

// Seeded scenario factory: topology, gains and any auxiliary draws come from
// fixed substreams of the master seed.
Scenario make_scenario(const TopologyParams& topology,
                       const ChannelParams& channel, const RadioParams& radio,
                       std::uint64_t seed);

// One realization of one mode; fills the summary row and the per-run trace
// CSV body (header included).
SummaryRow run_single(RunMode mode, const Scenario& sc,
                      const ExperimentConfig& config, std::uint64_t seed,
                      std::string* trace_csv);

// Runs the full campaign and writes summary.csv, trace files and the
// manifest under config.output_dir. Individual run failures are recorded in
// their row without aborting the rest.
CampaignResult run_campaign(const ExperimentConfig& config);

// Dedicated-vs-reuse comparison (separate entry point; run_campaign
// dispatches here for mode-comparison configs). Writes comparison.csv.
std::vector<ComparisonRow> mode_comparison(const ExperimentConfig& config);

std::string summary_csv(const std::vector<SummaryRow>& rows);

}  // namespace d2d
