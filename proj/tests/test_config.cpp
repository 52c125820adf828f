#include <string>

#include "doctest.h"

#include "d2d/config.hpp"

using namespace d2d;

namespace {

ConfigErrorCode code_of(const std::string& text) {
  try {
    parse_config_text(text);
  } catch (const ConfigError& e) {
    return e.code();
  }
  FAIL("expected a config error");
  return ConfigErrorCode::kSyntax;
}

}  // namespace

TEST_CASE("defaults") {
  const ExperimentConfig c = parse_config_text("mode = overlay-iadrmp\n");
  REQUIRE(c.modes.size() == 1);
  CHECK(c.modes[0] == RunMode::kOverlayIadrmp);
  CHECK(c.topology.num_cells == 1);
  CHECK(c.topology.cell_radius_m == 500.0);
  CHECK(c.topology.pairs_per_cell == 8);
  CHECK(c.topology.d2d_max_distance_m == 100.0);
  CHECK(c.radio.num_subcarriers == 8);
  CHECK(c.radio.noise_w == 1e-13);
  CHECK(c.radio.power_budget_w == 0.25);
  CHECK(c.radio.q_max_w == 1e-13);
  CHECK(c.eps == 1e-4);
  CHECK(c.gamma == 0.1);
  CHECK(c.max_rounds == 10000);
  CHECK(c.multistart_orders == 6);
  CHECK(c.multistart_inits == 2);
  // default seed block: 20 seeds starting at 1
  REQUIRE(c.seeds.size() == 20);
  CHECK(c.seeds.front() == 1);
  CHECK(c.seeds.back() == 20);
  CHECK(c.workers == 1);
}

TEST_CASE("full parse") {
  const ExperimentConfig c = parse_config_text(
      "mode = overlay-iadrmp, underlay-iadrmpic  # two modes\n"
      "# a comment line\n"
      "cells = 3\n"
      "subcarriers = 12\n"
      "noise = 2e-13\n"
      "power_budget = 0.5\n"
      "mask_mode = constant\n"
      "mask_value = 0.1\n"
      "shadowing = off\n"
      "seeds = 5, 9, 12\n"
      "power_sweep = 0.01, 0.1, 1\n"
      "output_dir = /tmp/x\n"
      "workers = 4\n");
  REQUIRE(c.modes.size() == 2);
  CHECK(c.modes[1] == RunMode::kUnderlayIadrmpic);
  CHECK(c.topology.num_cells == 3);
  CHECK(c.radio.num_subcarriers == 12);
  CHECK(c.radio.noise_w == 2e-13);
  CHECK(c.radio.mask_mode == MaskMode::kConstant);
  CHECK(c.radio.mask_value_w == 0.1);
  CHECK(!c.channel.shadowing);
  CHECK(c.seeds == std::vector<std::uint64_t>{5, 9, 12});
  CHECK(c.power_sweep == std::vector<double>{0.01, 0.1, 1.0});
  CHECK(c.output_dir == "/tmp/x");
  CHECK(c.workers == 4);
}

TEST_CASE("seed expansion") {
  const ExperimentConfig c = parse_config_text(
      "mode = overlay-iwf\nseed_count = 3\nseed_base = 100\n");
  CHECK(c.seeds == std::vector<std::uint64_t>{100, 101, 102});
}

TEST_CASE("error codes and line context") {
  CHECK(code_of("mode = overlay-iadrmp\nbogus_key = 3\n") ==
        ConfigErrorCode::kUnknownKey);
  CHECK(code_of("mode = overlay-iadrmp\ncells = 2\ncells = 3\n") ==
        ConfigErrorCode::kDuplicateKey);
  CHECK(code_of("mode = overlay-iadrmp\nthis line has no equals\n") ==
        ConfigErrorCode::kSyntax);
  CHECK(code_of("mode = overlay-iadrmp\ncells = zero\n") ==
        ConfigErrorCode::kInvalidValue);
  CHECK(code_of("mode = overlay-iadrmp\ncells = 0\n") ==
        ConfigErrorCode::kInvalidValue);
  CHECK(code_of("mode = overlay-iadrmp\nnoise = -1e-13\n") ==
        ConfigErrorCode::kInvalidValue);
  CHECK(code_of("mode = flying-mode\n") == ConfigErrorCode::kInvalidValue);
  CHECK(code_of("cells = 2\n") == ConfigErrorCode::kInvalidValue);  // mode missing
  CHECK(code_of("mode = overlay-iadrmp\nseeds = 1\nseed_count = 4\n") ==
        ConfigErrorCode::kInvalidValue);
  CHECK(code_of("mode = mode-comparison, overlay-iwf\n") ==
        ConfigErrorCode::kInvalidValue);
  CHECK(code_of("mode = overlay-iadrmp\nsubcarriers = 4\n"
                "n_dedicated_list = 4\n") == ConfigErrorCode::kInvalidValue);

  try {
    parse_config_text("mode = overlay-iadrmp\ncells = \n");
    FAIL("expected error");
  } catch (const ConfigError& e) {
    CHECK(e.code() == ConfigErrorCode::kSyntax);
    CHECK(e.line() == 2);
    CHECK(std::string(e.what()).find("line 2") != std::string::npos);
  }

  try {
    parse_config("/nonexistent/path/run.cfg");
    FAIL("expected error");
  } catch (const ConfigError& e) {
    CHECK(e.code() == ConfigErrorCode::kMissingFile);
  }
}

TEST_CASE("comparison defaults") {
  const ExperimentConfig c = parse_config_text(
      "mode = mode-comparison\nsubcarriers = 24\ncells = 3\n"
      "pairs_per_cell = 4\nues_per_cell = 8\n");
  CHECK(c.n_dedicated_list == std::vector<int>{4, 8, 12});
  CHECK(c.d_max_list == std::vector<double>{25.0, 50.0, 100.0});
  REQUIRE(c.q_max_list.size() == 3);
  CHECK(c.q_max_list[0] == c.radio.q_max_w);
  CHECK(c.ue_power_budget_w == 1.0);
}

TEST_CASE("manifest is stable and complete") {
  const std::string text =
      "mode = overlay-multistart\ncells = 2\nseeds = 3, 4\nworkers = 2\n";
  const std::string m1 = config_manifest(parse_config_text(text));
  const std::string m2 = config_manifest(parse_config_text(text));
  CHECK(m1 == m2);
  CHECK(m1.find("mode = overlay-multistart") != std::string::npos);
  CHECK(m1.find("seeds = 3,4") != std::string::npos);
  CHECK(m1.find("cells = 2") != std::string::npos);

  // a changed parameter shows up
  const std::string m3 =
      config_manifest(parse_config_text("mode = overlay-multistart\ncells = 5\n"));
  CHECK(m3.find("cells = 5") != std::string::npos);
  CHECK(m1 != m3);
}
