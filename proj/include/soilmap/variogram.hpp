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

#ifndef SOILMAP_VARIOGRAM_HPP
#define SOILMAP_VARIOGRAM_HPP

#include <span>
#include <vector>

#include "soilmap/error.hpp"
#include "soilmap/grid.hpp"

namespace soilmap {

/// Linear (bounded) semivariogram model parameters.
struct VariogramParams {
  double nugget{0.0};   // p0, semivariance just above h = 0 (kPa^2)
  double range_m{1.0};  // p1, distance beyond which points decorrelate
  double sill{0.0};     // p2, semivariance climb between nugget and plateau

  void validate() const {
    if (!(nugget >= 0.0) || !(sill >= 0.0) || !(range_m > 0.0)) {
      throw InvalidArgument(
          "VariogramParams: need nugget >= 0, sill >= 0, range > 0");
    }
  }
};

/// Piecewise-linear model: 0 at h = 0, nugget + sill * h / range on
/// (0, range), nugget + sill beyond. The jump at h = 0 is intentional; the
/// nugget applies only to distinct locations.
double semivariance(const VariogramParams& params, double h);

struct VariogramBin {
  double lag_m{0.0};    // mean pair distance in the bin
  double gamma{0.0};    // kPa^2
  long pair_count{0};
};

struct ExperimentalVariogram {
  std::vector<VariogramBin> bins;

  double max_bin_lag() const {
    return bins.empty() ? 0.0 : bins.back().lag_m;
  }
};

/// Matheron estimator over all sample pairs closer than max_lag, binned by
/// [k*w, (k+1)*w). Bins with no pairs are omitted.
ExperimentalVariogram experimental_semivariogram(
    std::span<const PointValue> samples, double bin_width_m, double max_lag_m);

struct VariogramFit {
  VariogramParams params;
  bool degenerate{false};  // no resolvable spatial structure (sill ~ 0)
  double weighted_sse{0.0};
};

/// Fit the linear model to binned semivariances by pair-count-weighted
/// least squares: closed-form (nugget, sill) at each candidate range,
/// range located by grid search plus golden-section refinement.
VariogramFit fit_linear(const ExperimentalVariogram& ev);

/// Slope-preserving range extension: same rising branch, plateau pushed to
/// min_range_m. A model whose plateau falls inside the prediction domain
/// is not conditionally negative definite over the plane and can produce
/// negative kriging variances; extending the range past the domain span
/// restores validity without touching the fit below the original range.
VariogramParams with_min_range(const VariogramParams& params,
                               double min_range_m);

}  // namespace soilmap

#endif  // SOILMAP_VARIOGRAM_HPP
