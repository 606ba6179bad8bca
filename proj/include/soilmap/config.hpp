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

#ifndef SOILMAP_CONFIG_HPP
#define SOILMAP_CONFIG_HPP

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "soilmap/simulation.hpp"

namespace soilmap {

struct SurrogateConfig {
  SurrogateMode mode{SurrogateMode::synthetic};
  std::uint64_t seed{1};
  std::vector<VariogramParams> layer_params;  // one per layer
  std::vector<double> depth_trend_kpa;        // one per layer
  std::string path;  // directory with truth_k.csv, mode == loaded
};

/// One JSON file drives every experiment. Defaults follow the demo field:
/// 5 m cells, 8 layers of 5 cm, budgets {15, 20, 30, 50}.
struct RunConfig {
  double width_m{233.0};
  double height_m{100.0};
  double cell_size_m{5.0};
  std::string mask_path;  // optional grid CSV of 0/1, resolved when set
  std::vector<CellIndex> masked_cells;  // optional inline unreachable cells

  LayerSpec layers{8, 5.0};
  double profile_depth_step_cm{50.0 / 300.0};

  VariogramSettings variogram;
  bool variogram_bin_width_set{false};
  bool variogram_max_lag_set{false};

  SurrogateConfig surrogate;
  std::vector<StrategyConfig> strategies;
  std::vector<int> budgets{15, 20, 30, 50};
  std::vector<std::uint64_t> seeds{1, 2, 3, 4, 5};
  double noise_sd_kpa{0.0};
  std::optional<Location> start;

  void validate() const;
};

/// Parse and fully validate a config file; defaults fill every omitted
/// key. Any failure is a structured error naming the file position or
/// offending field.
RunConfig load_config(const std::string& path);

/// Build the field grid (loading the mask file when configured).
FieldGrid make_grid(const RunConfig& cfg);

/// Derive simulation settings: unset variogram bin width defaults to the
/// cell size, unset max lag to half the grid diagonal, unset start to the
/// top-left cell center.
SimulationSettings make_settings(const RunConfig& cfg, const FieldGrid& grid);

/// Generate or load the configured surrogate field.
SurrogateField make_surrogate(const RunConfig& cfg, const FieldGrid& grid);

/// Built-in demo setup: the 233 x 100 m field at 5 m cells with a 4-cell
/// masked corner (936 reachable cells), 8 layers of 5 cm with a monotone
/// depth trend.
RunConfig demo_config();

}  // namespace soilmap

#endif  // SOILMAP_CONFIG_HPP
