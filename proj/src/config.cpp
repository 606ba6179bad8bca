// Copyright 2026 The soilmap authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "soilmap/config.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>

#include <json.hpp>

#include "soilmap/csv.hpp"

namespace soilmap {

namespace {

using nlohmann::json;

double get_number(const json& j, const std::string& key, double fallback) {
  if (!j.contains(key)) return fallback;
  if (!j.at(key).is_number()) {
    throw ValidationError("config: '" + key + "' must be a number");
  }
  return j.at(key).get<double>();
}

VariogramParams parse_params(const json& j, const std::string& where) {
  if (!j.is_object()) {
    throw ValidationError("config: " + where + " must be an object");
  }
  VariogramParams p;
  p.nugget = get_number(j, "nugget", 0.0);
  p.range_m = get_number(j, "range_m", 1.0);
  p.sill = get_number(j, "sill", 0.0);
  try {
    p.validate();
  } catch (const InvalidArgument& e) {
    throw ValidationError("config: " + where + ": " + e.what());
  }
  return p;
}

StrategyConfig parse_strategy(const json& j) {
  if (!j.is_object() || !j.contains("kind")) {
    throw ValidationError("config: each strategy needs a 'kind'");
  }
  StrategyConfig s;
  s.kind = strategy_kind_from_string(j.at("kind").get<std::string>());
  s.budget = static_cast<int>(get_number(j, "budget", 50));
  s.seed = static_cast<std::uint64_t>(get_number(j, "seed", 0));
  s.candidate_count = static_cast<int>(get_number(j, "candidate_count", 50));
  if (j.contains("initial_plan")) {
    s.initial_plan =
        strategy_kind_from_string(j.at("initial_plan").get<std::string>());
  }
  s.validate();
  return s;
}

std::string resolve(const std::filesystem::path& base,
                    const std::string& path) {
  const std::filesystem::path p(path);
  return p.is_absolute() ? p.string() : (base / p).string();
}

}  // namespace

void RunConfig::validate() const {
  if (!(width_m > 0.0)) throw ValidationError("config: field.width_m must be positive");
  if (!(height_m > 0.0)) throw ValidationError("config: field.height_m must be positive");
  if (!(cell_size_m > 0.0)) throw ValidationError("config: field.cell_size_m must be positive");
  try {
    layers.validate();
  } catch (const InvalidArgument& e) {
    throw ValidationError(std::string("config: layers: ") + e.what());
  }
  if (!(profile_depth_step_cm > 0.0)) {
    throw ValidationError("config: profile.depth_step_cm must be positive");
  }
  try {
    variogram.prior.validate();
  } catch (const InvalidArgument& e) {
    throw ValidationError(std::string("config: variogram.prior: ") + e.what());
  }
  if (variogram_bin_width_set && !(variogram.bin_width_m > 0.0)) {
    throw ValidationError("config: variogram.bin_width_m must be positive");
  }
  if (variogram_max_lag_set && !(variogram.max_lag_m > 0.0)) {
    throw ValidationError("config: variogram.max_lag_m must be positive");
  }
  if (budgets.empty()) throw ValidationError("config: budgets must be non-empty");
  for (const int b : budgets) {
    if (b < 3) throw ValidationError("config: budgets entries must be >= 3");
  }
  if (seeds.empty()) throw ValidationError("config: seeds must be non-empty");
  if (noise_sd_kpa < 0.0) {
    throw ValidationError("config: noise_sd_kpa must be >= 0");
  }
  if (surrogate.mode == SurrogateMode::loaded && surrogate.path.empty()) {
    throw ValidationError("config: surrogate.path required when mode is load");
  }
  const int m = layers.count;
  if (!surrogate.layer_params.empty() &&
      static_cast<int>(surrogate.layer_params.size()) != m) {
    throw ValidationError("config: surrogate.params must match layer count");
  }
  if (!surrogate.depth_trend_kpa.empty() &&
      static_cast<int>(surrogate.depth_trend_kpa.size()) != m) {
    throw ValidationError("config: surrogate.depth_trend_kpa must match layer count");
  }
  for (const StrategyConfig& s : strategies) s.validate();
}

namespace {

RunConfig config_from_json(const json& j, const std::filesystem::path& base) {
  RunConfig cfg;
  if (j.contains("field")) {
    const json& f = j.at("field");
    cfg.width_m = get_number(f, "width_m", cfg.width_m);
    cfg.height_m = get_number(f, "height_m", cfg.height_m);
    cfg.cell_size_m = get_number(f, "cell_size_m", cfg.cell_size_m);
    if (f.contains("mask_path")) {
      cfg.mask_path = resolve(base, f.at("mask_path").get<std::string>());
      if (!std::filesystem::exists(cfg.mask_path)) {
        throw ValidationError("config: field.mask_path '" + cfg.mask_path +
                              "' does not exist");
      }
    }
    if (f.contains("masked_cells")) {
      for (const json& c : f.at("masked_cells")) {
        if (!c.is_array() || c.size() != 2) {
          throw ValidationError(
              "config: field.masked_cells entries must be [i, j] pairs");
        }
        cfg.masked_cells.push_back({c.at(0).get<int>(), c.at(1).get<int>()});
      }
    }
  }
  if (j.contains("layers")) {
    const json& l = j.at("layers");
    cfg.layers.count = static_cast<int>(get_number(l, "count", cfg.layers.count));
    cfg.layers.thickness_cm =
        get_number(l, "thickness_cm", cfg.layers.thickness_cm);
  }
  if (j.contains("profile")) {
    cfg.profile_depth_step_cm = get_number(j.at("profile"), "depth_step_cm",
                                           cfg.profile_depth_step_cm);
  }
  if (j.contains("variogram")) {
    const json& v = j.at("variogram");
    if (v.contains("bin_width_m")) {
      cfg.variogram.bin_width_m = get_number(v, "bin_width_m", 0.0);
      cfg.variogram_bin_width_set = true;
    }
    if (v.contains("max_lag_m")) {
      cfg.variogram.max_lag_m = get_number(v, "max_lag_m", 0.0);
      cfg.variogram_max_lag_set = true;
    }
    if (v.contains("prior")) {
      cfg.variogram.prior = parse_params(v.at("prior"), "variogram.prior");
    }
    if (v.contains("freeze")) cfg.variogram.freeze = v.at("freeze").get<bool>();
  }
  if (j.contains("surrogate")) {
    const json& s = j.at("surrogate");
    if (s.contains("mode")) {
      const std::string mode = s.at("mode").get<std::string>();
      if (mode == "synthetic") {
        cfg.surrogate.mode = SurrogateMode::synthetic;
      } else if (mode == "load") {
        cfg.surrogate.mode = SurrogateMode::loaded;
      } else {
        throw ValidationError("config: surrogate.mode must be synthetic or load");
      }
    }
    cfg.surrogate.seed =
        static_cast<std::uint64_t>(get_number(s, "seed", 1));
    if (s.contains("params")) {
      const json& p = s.at("params");
      if (p.is_array()) {
        for (const json& e : p) {
          cfg.surrogate.layer_params.push_back(
              parse_params(e, "surrogate.params[]"));
        }
      } else {
        cfg.surrogate.layer_params.assign(
            static_cast<std::size_t>(cfg.layers.count),
            parse_params(p, "surrogate.params"));
      }
    }
    if (s.contains("depth_trend_kpa")) {
      for (const json& e : s.at("depth_trend_kpa")) {
        cfg.surrogate.depth_trend_kpa.push_back(e.get<double>());
      }
    }
    if (s.contains("path")) {
      cfg.surrogate.path = resolve(base, s.at("path").get<std::string>());
      if (cfg.surrogate.mode == SurrogateMode::loaded &&
          !std::filesystem::exists(cfg.surrogate.path)) {
        throw ValidationError("config: surrogate.path '" + cfg.surrogate.path +
                              "' does not exist");
      }
    }
  }
  if (j.contains("strategies")) {
    for (const json& s : j.at("strategies")) {
      cfg.strategies.push_back(parse_strategy(s));
    }
  }
  if (j.contains("budgets")) {
    cfg.budgets.clear();
    for (const json& b : j.at("budgets")) cfg.budgets.push_back(b.get<int>());
  }
  if (j.contains("seeds")) {
    cfg.seeds.clear();
    for (const json& s : j.at("seeds")) {
      cfg.seeds.push_back(s.get<std::uint64_t>());
    }
  }
  cfg.noise_sd_kpa = get_number(j, "noise_sd_kpa", cfg.noise_sd_kpa);
  if (j.contains("start")) {
    cfg.start = Location{get_number(j.at("start"), "x_m", 0.0),
                         get_number(j.at("start"), "y_m", 0.0)};
  }
  cfg.validate();
  return cfg;
}

}  // namespace

RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw NotFound("config file '" + path + "' not found");
  json j;
  try {
    j = json::parse(in);
  } catch (const json::parse_error& e) {
    throw ParseError("config '" + path + "': " + e.what());
  }
  const std::filesystem::path base = std::filesystem::path(path).parent_path();
  try {
    return config_from_json(j, base);
  } catch (const json::exception& e) {
    // wrong JSON value types are validation, not runtime, failures
    throw ValidationError("config '" + path + "': " + e.what());
  }
}

FieldGrid make_grid(const RunConfig& cfg) {
  const int nx = static_cast<int>(std::ceil(cfg.width_m / cfg.cell_size_m));
  const int ny = static_cast<int>(std::ceil(cfg.height_m / cfg.cell_size_m));
  std::optional<BoolGrid> mask;
  if (!cfg.mask_path.empty()) {
    const GridArray raw = load_grid_csv(cfg.mask_path);
    BoolGrid m(raw.rows(), raw.cols());
    for (Eigen::Index j = 0; j < raw.rows(); ++j) {
      for (Eigen::Index i = 0; i < raw.cols(); ++i) {
        m(j, i) = std::isfinite(raw(j, i)) && raw(j, i) > 0.5;
      }
    }
    mask = std::move(m);
  }
  if (!cfg.masked_cells.empty()) {
    if (!mask) mask = BoolGrid::Constant(ny, nx, true);
    for (const CellIndex c : cfg.masked_cells) {
      if (c.i < 0 || c.i >= static_cast<int>(mask->cols()) || c.j < 0 ||
          c.j >= static_cast<int>(mask->rows())) {
        throw ValidationError("config: masked cell (" + std::to_string(c.i) +
                              ", " + std::to_string(c.j) + ") outside grid");
      }
      (*mask)(c.j, c.i) = false;
    }
  }
  return build_grid(cfg.width_m, cfg.height_m, cfg.cell_size_m, mask);
}

SimulationSettings make_settings(const RunConfig& cfg, const FieldGrid& grid) {
  SimulationSettings settings;
  settings.layers = cfg.layers;
  settings.variogram = cfg.variogram;
  if (!cfg.variogram_bin_width_set) {
    settings.variogram.bin_width_m = grid.cell_size();
  }
  if (!cfg.variogram_max_lag_set) {
    settings.variogram.max_lag_m =
        0.5 * std::hypot(grid.extent_x(), grid.extent_y());
  }
  settings.noise_sd_kpa = cfg.noise_sd_kpa;
  settings.start =
      cfg.start ? *cfg.start : grid.cell_center({0, grid.ny() - 1});
  return settings;
}

SurrogateField make_surrogate(const RunConfig& cfg, const FieldGrid& grid) {
  if (cfg.surrogate.mode == SurrogateMode::loaded) {
    return load_surrogate(grid, cfg.layers, cfg.surrogate.path);
  }
  std::vector<VariogramParams> params = cfg.surrogate.layer_params;
  if (params.empty()) {
    params.assign(static_cast<std::size_t>(cfg.layers.count),
                  cfg.variogram.prior);
  }
  std::vector<double> trend = cfg.surrogate.depth_trend_kpa;
  if (trend.empty()) {
    // Compaction grows with depth; default to an even ramp well above the
    // clamp at 0.
    trend.resize(static_cast<std::size_t>(cfg.layers.count));
    for (int k = 0; k < cfg.layers.count; ++k) {
      trend[static_cast<std::size_t>(k)] = 350.0 + 50.0 * k;
    }
  }
  return generate_surrogate(grid, cfg.layers, params, trend,
                            cfg.surrogate.seed);
}

RunConfig demo_config() {
  RunConfig cfg;
  cfg.width_m = 233.0;
  cfg.height_m = 100.0;
  cfg.cell_size_m = 5.0;
  // 2x2 unreachable corner: 940 - 4 = 936 cells.
  cfg.masked_cells = {{45, 0}, {46, 0}, {45, 1}, {46, 1}};
  cfg.layers = {8, 5.0};
  // Long-range linear structure: the bounded-linear covariance is only
  // positive definite on this grid when the range clears the field
  // diagonal (~255 m), so the generator needs range >= 260 here.
  cfg.variogram.prior = {300.0, 260.0, 1500.0};
  cfg.surrogate.seed = 1;
  return cfg;
}

}  // namespace soilmap
