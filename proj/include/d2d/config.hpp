#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "d2d/scenario.hpp"

namespace d2d {

enum class ConfigErrorCode {
  kMissingFile = 1,
  kSyntax = 2,
  kUnknownKey = 3,
  kDuplicateKey = 4,
  kInvalidValue = 5,
};

class ConfigError : public std::runtime_error {
 public:
  ConfigError(ConfigErrorCode code, int line, const std::string& message)
      : std::runtime_error(line > 0 ? "line " + std::to_string(line) + ": " + message
                                    : message),
        code_(code),
        line_(line) {}
  ConfigErrorCode code() const { return code_; }
  int line() const { return line_; }

 private:
  ConfigErrorCode code_;
  int line_;
};

enum class RunMode {
  kOverlayIadrmp,
  kOverlayIwf,
  kOverlayMultistart,
  kUnderlayIadrmpic,
  kUnderlayUpperBound,
  kModeComparison,
};

std::string mode_name(RunMode mode);

struct ExperimentConfig {
  std::vector<RunMode> modes;

  TopologyParams topology;
  ChannelParams channel;
  RadioParams radio;

  double eps = 1e-4;
  double gamma = 0.1;
  int max_rounds = 10000;
  int max_outer = 2000;
  double eps_outer = 1e-6;
  double slack_tol = 0.05;
  int multistart_orders = 6;
  int multistart_inits = 2;
  int dual_max_steps = 0;  // 0 = 200*M

  std::vector<std::uint64_t> seeds;

  // budget / threshold sweeps; empty = single point from radio params
  std::vector<double> power_sweep;
  std::vector<double> q_sweep;

  // mode-comparison settings
  std::vector<int> n_dedicated_list;
  std::vector<double> d_max_list;
  std::vector<double> q_max_list;  // paired with n_dedicated_list
  double ue_power_budget_w = 1.0;

  std::string output_dir = ".";
  int workers = 1;
  int verbosity = 1;
};

ExperimentConfig parse_config_text(const std::string& text);
ExperimentConfig parse_config(const std::string& path);

// Fully-resolved run manifest: every parameter plus the seed list, one
// "key = value" per line. Byte-stable for identical configs.
std::string config_manifest(const ExperimentConfig& config);

}  // namespace d2d
