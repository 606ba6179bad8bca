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

#ifndef SOILMAP_CSV_HPP
#define SOILMAP_CSV_HPP

#include <optional>
#include <string>
#include <vector>

#include "soilmap/exploration.hpp"
#include "soilmap/grid.hpp"
#include "soilmap/kriging.hpp"
#include "soilmap/simulation.hpp"

namespace soilmap {

/// Canonical number formatting for every CSV writer: 9 significant digits,
/// so identical inputs always produce identical bytes.
std::string format_number(double v);

/// Row-major grid CSV: one line per grid y-index, unreachable (NaN) cells
/// as empty fields. Writing then re-loading then re-writing is
/// byte-identical.
void export_grid_csv(const GridArray& values, const std::string& path);
GridArray load_grid_csv(const std::string& path);

/// Sample CSV, header required. Two schemas:
///   id,x_m,y_m,v0,...,v{m-1}   pre-aggregated layer values (m = spec.count)
///   id,x_m,y_m,d0,...,d{K-1}   raw profile readings at depth_step_cm steps
std::vector<Sample> load_samples_csv(const std::string& path,
                                     const LayerSpec& spec,
                                     double depth_step_cm);

void export_plan_csv(const Plan& plan, const FieldGrid& grid,
                     const std::string& path);

void export_run_csv(const RunRecord& record, const std::string& path);

void export_comparison_csv(const std::vector<ComparisonRow>& rows,
                           const std::string& path);

/// Rebuild a (ny, nx) surface from a reachable-cell ordinal row (as stored
/// in run traces).
GridArray grid_from_ordinals(const FieldGrid& grid, const Vector& values);

/// Load a surrogate written by the generator: truth_0.csv .. truth_{m-1}.csv
/// under `dir`, shapes matching the grid.
SurrogateField load_surrogate(const FieldGrid& grid, const LayerSpec& spec,
                              const std::string& dir);

struct NrmseRow {
  int layer{0};
  double rmse{0.0};
  double mean_a{0.0};
  std::optional<double> normalized;  // empty when the layer mean is zero
};

/// Per-layer RMSE between two models' estimates, normalized by model A's
/// per-layer mean estimate.
std::vector<NrmseRow> normalized_rmse_report(const LayeredModel& model_a,
                                             const LayeredModel& model_b,
                                             const FieldGrid& grid);

}  // namespace soilmap

#endif  // SOILMAP_CSV_HPP
