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

#ifndef SOILMAP_SIMULATION_HPP
#define SOILMAP_SIMULATION_HPP

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "soilmap/exploration.hpp"
#include "soilmap/kriging.hpp"

namespace soilmap {

/// Experimental-variogram settings plus the prior model used before
/// enough samples accumulate (or always, when frozen).
struct VariogramSettings {
  double bin_width_m{5.0};
  double max_lag_m{125.0};
  VariogramParams prior{300.0, 60.0, 1500.0};
  bool freeze{false};
};

struct SimulationSettings {
  LayerSpec layers;
  VariogramSettings variogram;
  double noise_sd_kpa{0.0};
  Location start;  // robot start location
};

enum class SurrogateMode { synthetic, loaded };

/// Dense ground-truth compaction field used to simulate sampling offline.
struct SurrogateField {
  FieldGrid grid;
  std::vector<GridArray> truth;  // one (ny, nx) layer per depth layer
  SurrogateMode mode{SurrogateMode::synthetic};
  std::uint64_t seed{0};
  std::string source_path;  // loaded fields only
};

/// Draw each layer from a zero-mean stationary field whose semivariogram
/// is the layer's linear model (covariance (p0 + p2) - gamma(h)), via
/// dense Cholesky of the cell-to-cell covariance, then add the layer's
/// trend offset and clamp at 0 kPa.
SurrogateField generate_surrogate(const FieldGrid& grid, const LayerSpec& spec,
                                  std::span<const VariogramParams> layer_variograms,
                                  std::span<const double> depth_trend_kpa,
                                  std::uint64_t seed);

/// Read the surrogate back at a reachable cell, optionally with additive
/// Gaussian noise (values clamp at 0).
Sample sample_at(const SurrogateField& field, CellIndex cell,
                 double noise_sd_kpa, Rng& rng, int id);

struct StepRecord {
  int step{0};
  int sample_id{0};
  CellIndex cell;
  Location location;
  double cumulative_path_m{0.0};
  double mse{0.0};
  double rmse{0.0};
  double kv{0.0};
};

/// Full trace of one exploration run.
struct RunRecord {
  StrategyConfig strategy;
  std::uint64_t seed{0};
  Location start;
  Plan initial_plan;  // empty route for next-best-view strategies
  std::vector<StepRecord> steps;
  std::vector<Sample> samples;
  Matrix kv_trace;     // step x reachable-cell mean kriging variance
  Matrix sqerr_trace;  // step x reachable-cell squared error (layer mean)
  LayeredModel final_model;
};

struct ModelError {
  double mse{0.0};
  double rmse{0.0};
  Vector per_layer_mse;
};

/// MSE over all reachable cells of all layers against the surrogate truth,
/// with its square root and a per-layer breakdown.
ModelError model_error(const LayeredModel& model, const SurrogateField& field);

/// Pearson correlation between the concatenated per-step per-cell KV and
/// squared-error traces.
double kv_mse_correlation(const RunRecord& record);

/// Simulate one exploration run: move, sample, rebuild the layered model
/// (refitting variograms unless frozen), record error/variance traces.
RunRecord run_exploration(const StrategyConfig& strategy,
                          const SurrogateField& field,
                          const SimulationSettings& settings,
                          std::uint64_t seed);

struct ComparisonRow {
  StrategyKind kind{StrategyKind::random};
  int budget{0};
  double mean_rmse_kpa{0.0};
  double mean_path_m{0.0};
  double mean_final_kv{0.0};
  int runs{0};
};

/// Mean final RMSE / path length / KV per strategy and budget over the
/// given seeds.
std::vector<ComparisonRow> compare_strategies(
    std::span<const StrategyConfig> strategies, const SurrogateField& field,
    const SimulationSettings& settings, std::span<const int> budgets,
    std::span<const std::uint64_t> seeds);

}  // namespace soilmap

#endif  // SOILMAP_SIMULATION_HPP
