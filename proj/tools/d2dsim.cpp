#include <cstdio>
#include <exception>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "d2d/campaign.hpp"
#include "d2d/config.hpp"

namespace {

int run(int argc, char** argv) {
  CLI::App app{"Distributed power allocation simulator for D2D OFDMA networks"};
  app.get_formatter()->column_width(34);

  std::string config_path;
  app.add_option("config", config_path, "experiment config file (key = value)")
      ->required();

  std::vector<std::uint64_t> seed_override;
  app.add_option("--seed", seed_override,
                 "replace the seed list from the config");
  std::string mode_override;
  app.add_option("--mode", mode_override,
                 "run a single mode: overlay-iadrmp, overlay-iwf, "
                 "overlay-multistart, underlay-iadrmpic, underlay-ub, "
                 "mode-comparison");
  std::string output_dir;
  app.add_option("--output-dir", output_dir, "override the output directory");
  int workers = -1;
  app.add_option("--workers", workers, "override the worker thread count");
  int verbosity = -1;
  app.add_option("--verbosity", verbosity, "0 = quiet, 1 = summary, 2 = per-run");
  std::string dump_path;
  app.add_option("--dump-scenario", dump_path,
                 "write the first seed's scenario matrices to this file and exit");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  }

  d2d::ExperimentConfig config;
  try {
    config = d2d::parse_config(config_path);
    if (!mode_override.empty()) {
      // Reuse the config parser so the mode spelling is validated in one place.
      const d2d::ExperimentConfig probe =
          d2d::parse_config_text("mode = " + mode_override + "\n");
      config.modes = probe.modes;
    }
  } catch (const d2d::ConfigError& e) {
    std::cerr << "config error (" << config_path << "): " << e.what() << '\n';
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return 1;
  }
  if (!seed_override.empty()) config.seeds = seed_override;
  if (!output_dir.empty()) config.output_dir = output_dir;
  if (workers >= 1) config.workers = workers;
  if (verbosity >= 0) config.verbosity = verbosity;

  try {
    if (!dump_path.empty()) {
      const d2d::Scenario sc = d2d::make_scenario(
          config.topology, config.channel, config.radio, config.seeds.at(0));
      std::ofstream out(dump_path, std::ios::binary);
      if (!out) {
        std::cerr << "cannot write " << dump_path << '\n';
        return 2;
      }
      out << d2d::dump_scenario(sc);
      if (config.verbosity >= 1)
        std::cout << "wrote scenario for seed " << config.seeds.at(0) << " to "
                  << dump_path << '\n';
      return 0;
    }

    const d2d::CampaignResult result = d2d::run_campaign(config);
    if (config.verbosity >= 2) {
      for (const auto& row : result.rows)
        std::cout << row.mode << " seed=" << row.seed
                  << " sum_rate=" << row.sum_rate
                  << " converged=" << (row.converged ? 1 : 0)
                  << (row.error.empty() ? "" : " error=" + row.error) << '\n';
      for (const auto& row : result.comparison)
        std::cout << row.mode << " d_max=" << row.d_max
                  << " n_dedicated=" << row.n_dedicated
                  << " eta_mean=" << row.eta_mean << '\n';
    }
    if (config.verbosity >= 1) {
      std::cout << "runs: " << result.rows.size() << ", failures: "
                << result.failures << ", outputs in " << config.output_dir
                << '\n';
    }
    if (result.failures > 0) return 3;
    return 0;
  } catch (const std::exception& e) {
    std::cerr << "runtime error: " << e.what() << '\n';
    return 2;
  }
}

}  // namespace

int main(int argc, char** argv) { return run(argc, argv); }
