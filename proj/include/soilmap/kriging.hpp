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

#ifndef SOILMAP_KRIGING_HPP
#define SOILMAP_KRIGING_HPP

#include <Eigen/LU>
#include <span>
#include <vector>

#include "soilmap/grid.hpp"
#include "soilmap/variogram.hpp"

namespace soilmap {

/// Ordinary kriging weights plus the Lagrange multiplier of the
/// unbiasedness constraint.
struct KrigingSolution {
  Vector weights;
  double lagrange{0.0};
};

/// The ordinary kriging system in semivariance form,
///
///   [ Gamma_ij  1 ] [ w ]   [ gamma_i0 ]
///   [   1^T     0 ] [ l ] = [    1     ],
///
/// factorized once per sample geometry (LU with partial pivoting) and
/// back-substituted per prediction target.
class KrigingSystem {
 public:
  KrigingSystem(std::span<const Location> sample_locs,
                const VariogramParams& params);

  int sample_count() const { return static_cast<int>(locs_.size()); }
  const std::vector<Location>& locations() const { return locs_; }
  const VariogramParams& params() const { return params_; }

  /// Semivariances from every sample to `target` (the system RHS top block).
  Vector gamma_to(const Location& target) const;

  KrigingSolution solve(const Location& target) const;

  /// Stacked [w; lambda] columns for many targets; one triangular solve
  /// for the whole block.
  Matrix solve_all(std::span<const Location> targets) const;

  /// RHS block for many targets: (n+1) x T, bottom row all ones.
  Matrix rhs_all(std::span<const Location> targets) const;

 private:
  std::vector<Location> locs_;
  VariogramParams params_;
  Eigen::PartialPivLU<Matrix> lu_;
};

/// One-shot weight solve (builds and factorizes the system for a single
/// target). Use KrigingSystem directly when predicting many targets.
KrigingSolution solve_weights(std::span<const Location> sample_locs,
                              const VariogramParams& params,
                              const Location& target);

/// Point estimate: dot product of weights and observed values.
double estimate(const KrigingSolution& sol, const Vector& values);

/// Prediction variance sum(w_i * gamma_i0) + lambda. Negatives within
/// 1e-9 clamp to zero; anything more negative throws.
double variance(const KrigingSolution& sol, const Vector& gamma_to_target);

/// One depth layer's kriged surface over the reachable cells.
struct LayerMap {
  GridArray estimates;  // kPa, NaN outside the mask
  GridArray variances;  // kPa^2, NaN outside the mask
  VariogramParams params;
  std::vector<int> sample_ids;
};

/// All layers plus the mean-variance reward surface driving exploration.
struct LayeredModel {
  std::vector<LayerMap> layers;
  GridArray mean_kv_grid;  // per-cell mean of layer variances
  double mean_kv{0.0};     // mean of mean_kv_grid over reachable cells
};

/// Krige one layer at every reachable cell center using every sample
/// (global neighbourhood). Duplicate locations are merged by value
/// averaging first.
LayerMap krige_layer(const std::vector<PointValue>& samples,
                     const VariogramParams& params, const FieldGrid& grid);

/// Build the full per-layer model and its mean kriging-variance surface.
/// `params_per_layer` must hold one entry per layer.
LayeredModel build_layered_model(std::span<const Sample> samples,
                                 const FieldGrid& grid, const LayerSpec& spec,
                                 std::span<const VariogramParams> params_per_layer);

}  // namespace soilmap

#endif  // SOILMAP_KRIGING_HPP
