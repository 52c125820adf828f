#include "d2d/config.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

namespace d2d {

namespace {

std::string trim(const std::string& s) {
  std::size_t begin = 0;
  std::size_t end = s.size();
  while (begin < end && std::isspace(static_cast<unsigned char>(s[begin]))) ++begin;
  while (end > begin && std::isspace(static_cast<unsigned char>(s[end - 1]))) --end;
  return s.substr(begin, end - begin);
}

struct Entry {
  std::string value;
  int line = 0;
};

double parse_double(const Entry& e, const std::string& key) {
  try {
    std::size_t pos = 0;
    const double v = std::stod(e.value, &pos);
    if (pos != e.value.size()) throw std::invalid_argument("trailing characters");
    return v;
  } catch (const std::exception&) {
    throw ConfigError(ConfigErrorCode::kInvalidValue, e.line,
                      "invalid number for '" + key + "': " + e.value);
  }
}

long parse_int(const Entry& e, const std::string& key) {
  try {
    std::size_t pos = 0;
    const long v = std::stol(e.value, &pos);
    if (pos != e.value.size()) throw std::invalid_argument("trailing characters");
    return v;
  } catch (const std::exception&) {
    throw ConfigError(ConfigErrorCode::kInvalidValue, e.line,
                      "invalid integer for '" + key + "': " + e.value);
  }
}

bool parse_bool(const Entry& e, const std::string& key) {
  if (e.value == "true" || e.value == "on" || e.value == "1") return true;
  if (e.value == "false" || e.value == "off" || e.value == "0") return false;
  throw ConfigError(ConfigErrorCode::kInvalidValue, e.line,
                    "invalid boolean for '" + key + "': " + e.value);
}

std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

RunMode parse_mode(const std::string& name, int line) {
  if (name == "overlay-iadrmp") return RunMode::kOverlayIadrmp;
  if (name == "overlay-iwf") return RunMode::kOverlayIwf;
  if (name == "overlay-multistart") return RunMode::kOverlayMultistart;
  if (name == "underlay-iadrmpic") return RunMode::kUnderlayIadrmpic;
  if (name == "underlay-ub") return RunMode::kUnderlayUpperBound;
  if (name == "mode-comparison") return RunMode::kModeComparison;
  throw ConfigError(ConfigErrorCode::kInvalidValue, line,
                    "unrecognized mode '" + name + "'");
}

const std::set<std::string>& known_keys() {
  static const std::set<std::string> keys = {
      "mode", "cells", "radius", "pairs_per_cell", "d_max", "d_min",
      "ues_per_cell", "path_loss_exponent", "path_loss_ref_gain",
      "shadow_sigma_db", "shadowing", "fading", "subcarriers", "noise",
      "power_budget", "mask_mode", "mask_value", "mask_cap", "q_max", "eps",
      "gamma", "max_rounds", "max_outer", "eps_outer", "slack_tol",
      "multistart_orders", "multistart_inits", "dual_max_steps", "seeds",
      "seed_count", "seed_base", "power_sweep", "q_sweep", "n_dedicated_list",
      "d_max_list", "q_max_list", "ue_power_budget", "output_dir", "workers",
      "verbosity"};
  return keys;
}

void require_positive(double v, const std::string& key, int line) {
  if (!(v > 0.0))
    throw ConfigError(ConfigErrorCode::kInvalidValue, line,
                      "'" + key + "' must be positive");
}

}  // namespace

std::string mode_name(RunMode mode) {
  switch (mode) {
    case RunMode::kOverlayIadrmp: return "overlay-iadrmp";
    case RunMode::kOverlayIwf: return "overlay-iwf";
    case RunMode::kOverlayMultistart: return "overlay-multistart";
    case RunMode::kUnderlayIadrmpic: return "underlay-iadrmpic";
    case RunMode::kUnderlayUpperBound: return "underlay-ub";
    case RunMode::kModeComparison: return "mode-comparison";
  }
  return "?";
}

ExperimentConfig parse_config_text(const std::string& text) {
  std::map<std::string, Entry> entries;
  std::istringstream is(text);
  std::string line;
  int line_no = 0;
  while (std::getline(is, line)) {
    ++line_no;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw ConfigError(ConfigErrorCode::kSyntax, line_no,
                        "expected 'key = value'");
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key.empty() || value.empty())
      throw ConfigError(ConfigErrorCode::kSyntax, line_no,
                        "empty key or value");
    if (!known_keys().count(key))
      throw ConfigError(ConfigErrorCode::kUnknownKey, line_no,
                        "unknown key '" + key + "'");
    if (entries.count(key))
      throw ConfigError(ConfigErrorCode::kDuplicateKey, line_no,
                        "duplicate key '" + key + "' (first on line " +
                            std::to_string(entries[key].line) + ")");
    entries[key] = {value, line_no};
  }

  if (!entries.count("mode"))
    throw ConfigError(ConfigErrorCode::kInvalidValue, 0,
                      "required key 'mode' is missing");

  ExperimentConfig config;
  auto take = [&entries](const std::string& key) -> const Entry* {
    auto it = entries.find(key);
    return it == entries.end() ? nullptr : &it->second;
  };

  for (const auto& name : split_list(entries["mode"].value))
    config.modes.push_back(parse_mode(name, entries["mode"].line));
  if (config.modes.empty())
    throw ConfigError(ConfigErrorCode::kInvalidValue, entries["mode"].line,
                      "empty mode list");

  if (const Entry* e = take("cells")) {
    config.topology.num_cells = static_cast<int>(parse_int(*e, "cells"));
    if (config.topology.num_cells < 1)
      throw ConfigError(ConfigErrorCode::kInvalidValue, e->line,
                        "'cells' must be >= 1");
  }
  if (const Entry* e = take("radius")) {
    config.topology.cell_radius_m = parse_double(*e, "radius");
    require_positive(config.topology.cell_radius_m, "radius", e->line);
  }
  if (const Entry* e = take("pairs_per_cell")) {
    config.topology.pairs_per_cell =
        static_cast<int>(parse_int(*e, "pairs_per_cell"));
    if (config.topology.pairs_per_cell < 1)
      throw ConfigError(ConfigErrorCode::kInvalidValue, e->line,
                        "'pairs_per_cell' must be >= 1");
  }
  if (const Entry* e = take("d_max")) {
    config.topology.d2d_max_distance_m = parse_double(*e, "d_max");
    if (config.topology.d2d_max_distance_m < 0.0)
      throw ConfigError(ConfigErrorCode::kInvalidValue, e->line,
                        "'d_max' must be >= 0");
  }
  if (const Entry* e = take("d_min")) {
    config.topology.min_distance_m = parse_double(*e, "d_min");
    require_positive(config.topology.min_distance_m, "d_min", e->line);
    config.channel.min_distance_m = config.topology.min_distance_m;
  }
  if (const Entry* e = take("ues_per_cell")) {
    config.topology.ues_per_cell = static_cast<int>(parse_int(*e, "ues_per_cell"));
    if (config.topology.ues_per_cell < 0)
      throw ConfigError(ConfigErrorCode::kInvalidValue, e->line,
                        "'ues_per_cell' must be >= 0");
  }
  if (const Entry* e = take("path_loss_exponent")) {
    config.channel.path_loss_exponent = parse_double(*e, "path_loss_exponent");
    require_positive(config.channel.path_loss_exponent, "path_loss_exponent", e->line);
  }
  if (const Entry* e = take("path_loss_ref_gain")) {
    config.channel.path_loss_ref_gain = parse_double(*e, "path_loss_ref_gain");
    require_positive(config.channel.path_loss_ref_gain, "path_loss_ref_gain", e->line);
  }
  if (const Entry* e = take("shadow_sigma_db"))
    config.channel.shadow_sigma_db = parse_double(*e, "shadow_sigma_db");
  if (const Entry* e = take("shadowing"))
    config.channel.shadowing = parse_bool(*e, "shadowing");
  if (const Entry* e = take("fading"))
    config.channel.fading = parse_bool(*e, "fading");
  if (const Entry* e = take("subcarriers")) {
    config.radio.num_subcarriers = static_cast<int>(parse_int(*e, "subcarriers"));
    if (config.radio.num_subcarriers < 1)
      throw ConfigError(ConfigErrorCode::kInvalidValue, e->line,
                        "'subcarriers' must be >= 1");
  }
  if (const Entry* e = take("noise")) {
    config.radio.noise_w = parse_double(*e, "noise");
    require_positive(config.radio.noise_w, "noise", e->line);
  }
  if (const Entry* e = take("power_budget")) {
    config.radio.power_budget_w = parse_double(*e, "power_budget");
    require_positive(config.radio.power_budget_w, "power_budget", e->line);
  }
  if (const Entry* e = take("mask_mode")) {
    if (e->value == "interference-derived")
      config.radio.mask_mode = MaskMode::kInterferenceDerived;
    else if (e->value == "constant")
      config.radio.mask_mode = MaskMode::kConstant;
    else
      throw ConfigError(ConfigErrorCode::kInvalidValue, e->line,
                        "mask_mode must be 'interference-derived' or 'constant'");
  }
  if (const Entry* e = take("mask_value")) {
    config.radio.mask_value_w = parse_double(*e, "mask_value");
    if (config.radio.mask_value_w < 0.0)
      throw ConfigError(ConfigErrorCode::kInvalidValue, e->line,
                        "'mask_value' must be >= 0");
  }
  if (const Entry* e = take("mask_cap")) {
    config.radio.mask_cap_w = parse_double(*e, "mask_cap");
    require_positive(config.radio.mask_cap_w, "mask_cap", e->line);
  }
  if (const Entry* e = take("q_max")) {
    config.radio.q_max_w = parse_double(*e, "q_max");
    if (config.radio.q_max_w < 0.0)
      throw ConfigError(ConfigErrorCode::kInvalidValue, e->line,
                        "'q_max' must be >= 0");
  }
  if (const Entry* e = take("eps")) {
    config.eps = parse_double(*e, "eps");
    require_positive(config.eps, "eps", e->line);
  }
  if (const Entry* e = take("gamma")) {
    config.gamma = parse_double(*e, "gamma");
    require_positive(config.gamma, "gamma", e->line);
  }
  if (const Entry* e = take("max_rounds")) {
    config.max_rounds = static_cast<int>(parse_int(*e, "max_rounds"));
    if (config.max_rounds < 1)
      throw ConfigError(ConfigErrorCode::kInvalidValue, e->line,
                        "'max_rounds' must be >= 1");
  }
  if (const Entry* e = take("max_outer")) {
    config.max_outer = static_cast<int>(parse_int(*e, "max_outer"));
    if (config.max_outer < 1)
      throw ConfigError(ConfigErrorCode::kInvalidValue, e->line,
                        "'max_outer' must be >= 1");
  }
  if (const Entry* e = take("eps_outer")) {
    config.eps_outer = parse_double(*e, "eps_outer");
    require_positive(config.eps_outer, "eps_outer", e->line);
  }
  if (const Entry* e = take("slack_tol")) {
    config.slack_tol = parse_double(*e, "slack_tol");
    if (config.slack_tol < 0.0)
      throw ConfigError(ConfigErrorCode::kInvalidValue, e->line,
                        "'slack_tol' must be >= 0");
  }
  if (const Entry* e = take("multistart_orders")) {
    config.multistart_orders = static_cast<int>(parse_int(*e, "multistart_orders"));
    if (config.multistart_orders < 1)
      throw ConfigError(ConfigErrorCode::kInvalidValue, e->line,
                        "'multistart_orders' must be >= 1");
  }
  if (const Entry* e = take("multistart_inits")) {
    config.multistart_inits = static_cast<int>(parse_int(*e, "multistart_inits"));
    if (config.multistart_inits < 1)
      throw ConfigError(ConfigErrorCode::kInvalidValue, e->line,
                        "'multistart_inits' must be >= 1");
  }
  if (const Entry* e = take("dual_max_steps")) {
    config.dual_max_steps = static_cast<int>(parse_int(*e, "dual_max_steps"));
    if (config.dual_max_steps < 0)
      throw ConfigError(ConfigErrorCode::kInvalidValue, e->line,
                        "'dual_max_steps' must be >= 0");
  }

  if (take("seeds") && take("seed_count"))
    throw ConfigError(ConfigErrorCode::kInvalidValue, take("seed_count")->line,
                      "'seeds' and 'seed_count' are mutually exclusive");
  if (const Entry* e = take("seeds")) {
    for (const auto& s : split_list(e->value)) {
      Entry item{s, e->line};
      config.seeds.push_back(static_cast<std::uint64_t>(parse_int(item, "seeds")));
    }
    if (config.seeds.empty())
      throw ConfigError(ConfigErrorCode::kInvalidValue, e->line, "empty seed list");
  } else {
    long count = 20;
    long base = 1;
    if (const Entry* e2 = take("seed_count")) {
      count = parse_int(*e2, "seed_count");
      if (count < 1)
        throw ConfigError(ConfigErrorCode::kInvalidValue, e2->line,
                          "'seed_count' must be >= 1");
    }
    if (const Entry* e2 = take("seed_base")) base = parse_int(*e2, "seed_base");
    for (long i = 0; i < count; ++i)
      config.seeds.push_back(static_cast<std::uint64_t>(base + i));
  }

  auto parse_double_list = [&](const char* key, std::vector<double>* out) {
    if (const Entry* e = take(key)) {
      for (const auto& s : split_list(e->value)) {
        Entry item{s, e->line};
        out->push_back(parse_double(item, key));
      }
    }
  };
  parse_double_list("power_sweep", &config.power_sweep);
  parse_double_list("q_sweep", &config.q_sweep);
  parse_double_list("d_max_list", &config.d_max_list);
  parse_double_list("q_max_list", &config.q_max_list);
  if (const Entry* e = take("n_dedicated_list")) {
    for (const auto& s : split_list(e->value)) {
      Entry item{s, e->line};
      const long v = parse_int(item, "n_dedicated_list");
      if (v < 1 || v >= config.radio.num_subcarriers)
        throw ConfigError(ConfigErrorCode::kInvalidValue, e->line,
                          "'n_dedicated_list' entries must be in [1, subcarriers)");
      config.n_dedicated_list.push_back(static_cast<int>(v));
    }
  }
  if (const Entry* e = take("ue_power_budget")) {
    config.ue_power_budget_w = parse_double(*e, "ue_power_budget");
    require_positive(config.ue_power_budget_w, "ue_power_budget", e->line);
  }
  if (const Entry* e = take("output_dir")) config.output_dir = e->value;
  if (const Entry* e = take("workers")) {
    config.workers = static_cast<int>(parse_int(*e, "workers"));
    if (config.workers < 1)
      throw ConfigError(ConfigErrorCode::kInvalidValue, e->line,
                        "'workers' must be >= 1");
  }
  if (const Entry* e = take("verbosity"))
    config.verbosity = static_cast<int>(parse_int(*e, "verbosity"));

  const bool has_comparison =
      std::count(config.modes.begin(), config.modes.end(),
                 RunMode::kModeComparison) > 0;
  if (has_comparison) {
    if (config.modes.size() != 1)
      throw ConfigError(ConfigErrorCode::kInvalidValue, entries["mode"].line,
                        "mode-comparison cannot be combined with other modes");
    if (config.n_dedicated_list.empty()) config.n_dedicated_list = {4, 8, 12};
    if (config.q_max_list.empty())
      config.q_max_list.assign(config.n_dedicated_list.size(),
                               config.radio.q_max_w);
    if (config.q_max_list.size() != config.n_dedicated_list.size())
      throw ConfigError(ConfigErrorCode::kInvalidValue, 0,
                        "'q_max_list' must pair with 'n_dedicated_list'");
    if (config.d_max_list.empty()) config.d_max_list = {25.0, 50.0, 100.0};
  }
  return config;
}

ExperimentConfig parse_config(const std::string& path) {
  std::ifstream in(path);
  if (!in)
    throw ConfigError(ConfigErrorCode::kMissingFile, 0,
                      "cannot open config file '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_config_text(buf.str());
}

std::string config_manifest(const ExperimentConfig& c) {
  std::ostringstream os;
  os.precision(17);
  os << "mode = ";
  for (std::size_t i = 0; i < c.modes.size(); ++i)
    os << (i ? "," : "") << mode_name(c.modes[i]);
  os << '\n';
  os << "cells = " << c.topology.num_cells << '\n';
  os << "radius = " << c.topology.cell_radius_m << '\n';
  os << "pairs_per_cell = " << c.topology.pairs_per_cell << '\n';
  os << "d_max = " << c.topology.d2d_max_distance_m << '\n';
  os << "d_min = " << c.topology.min_distance_m << '\n';
  os << "ues_per_cell = " << c.topology.ues_per_cell << '\n';
  os << "path_loss_exponent = " << c.channel.path_loss_exponent << '\n';
  os << "path_loss_ref_gain = " << c.channel.path_loss_ref_gain << '\n';
  os << "shadow_sigma_db = " << c.channel.shadow_sigma_db << '\n';
  os << "shadowing = " << (c.channel.shadowing ? "true" : "false") << '\n';
  os << "fading = " << (c.channel.fading ? "true" : "false") << '\n';
  os << "subcarriers = " << c.radio.num_subcarriers << '\n';
  os << "noise = " << c.radio.noise_w << '\n';
  os << "power_budget = " << c.radio.power_budget_w << '\n';
  os << "mask_mode = "
     << (c.radio.mask_mode == MaskMode::kInterferenceDerived
             ? "interference-derived"
             : "constant")
     << '\n';
  os << "mask_value = " << c.radio.mask_value_w << '\n';
  os << "mask_cap = " << c.radio.mask_cap_w << '\n';
  os << "q_max = " << c.radio.q_max_w << '\n';
  os << "eps = " << c.eps << '\n';
  os << "gamma = " << c.gamma << '\n';
  os << "max_rounds = " << c.max_rounds << '\n';
  os << "max_outer = " << c.max_outer << '\n';
  os << "eps_outer = " << c.eps_outer << '\n';
  os << "slack_tol = " << c.slack_tol << '\n';
  os << "multistart_orders = " << c.multistart_orders << '\n';
  os << "multistart_inits = " << c.multistart_inits << '\n';
  os << "dual_max_steps = " << c.dual_max_steps << '\n';
  auto emit_list = [&os](const char* key, const auto& v) {
    if (v.empty()) return;
    os << key << " = ";
    for (std::size_t i = 0; i < v.size(); ++i) os << (i ? "," : "") << v[i];
    os << '\n';
  };
  emit_list("seeds", c.seeds);
  emit_list("power_sweep", c.power_sweep);
  emit_list("q_sweep", c.q_sweep);
  emit_list("n_dedicated_list", c.n_dedicated_list);
  emit_list("d_max_list", c.d_max_list);
  emit_list("q_max_list", c.q_max_list);
  os << "ue_power_budget = " << c.ue_power_budget_w << '\n';
  return os.str();
}

}  // namespace d2d
