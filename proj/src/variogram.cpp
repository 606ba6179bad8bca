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

#include "soilmap/variogram.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace soilmap {

double semivariance(const VariogramParams& params, double h) {
  params.validate();
  if (!(h >= 0.0)) {
    throw InvalidArgument("semivariance: distance must be >= 0");
  }
  if (h == 0.0) return 0.0;
  if (h < params.range_m) {
    return params.nugget + params.sill * h / params.range_m;
  }
  return params.nugget + params.sill;
}

ExperimentalVariogram experimental_semivariogram(
    std::span<const PointValue> samples, double bin_width_m,
    double max_lag_m) {
  if (samples.size() < 2) {
    throw InsufficientData("experimental_semivariogram: need >= 2 samples");
  }
  if (!(bin_width_m > 0.0) || !(max_lag_m > 0.0)) {
    throw InvalidArgument(
        "experimental_semivariogram: bin width and max lag must be positive");
  }
  const int nbins = static_cast<int>(std::ceil(max_lag_m / bin_width_m));
  std::vector<double> sq_sum(nbins, 0.0);
  std::vector<double> dist_sum(nbins, 0.0);
  std::vector<long> count(nbins, 0);
  for (std::size_t a = 0; a < samples.size(); ++a) {
    for (std::size_t b = a + 1; b < samples.size(); ++b) {
      const double h = distance(samples[a].loc, samples[b].loc);
      if (h >= max_lag_m) continue;
      const int k = std::min(static_cast<int>(std::floor(h / bin_width_m)),
                             nbins - 1);
      const double dz = samples[a].value - samples[b].value;
      sq_sum[k] += dz * dz;
      dist_sum[k] += h;
      count[k] += 1;
    }
  }
  ExperimentalVariogram ev;
  for (int k = 0; k < nbins; ++k) {
    if (count[k] == 0) continue;
    ev.bins.push_back({dist_sum[k] / count[k], sq_sum[k] / (2.0 * count[k]),
                       count[k]});
  }
  return ev;
}

namespace {

double weighted_sse(const std::vector<VariogramBin>& bins, double nugget,
                    double sill, double range) {
  double sse = 0.0;
  for (const VariogramBin& b : bins) {
    const double a = std::min(b.lag_m / range, 1.0);
    const double r = nugget + sill * a - b.gamma;
    sse += b.pair_count * r * r;
  }
  return sse;
}

struct LineFit {
  double intercept{0.0};
  double slope{0.0};
};

/// Weighted least-squares line over bins [0, q), plus the zero-intercept
/// variant.
std::vector<LineFit> line_fits(const std::vector<VariogramBin>& bins,
                               std::size_t q) {
  double sn = 0.0, sh = 0.0, shh = 0.0, sg = 0.0, shg = 0.0;
  for (std::size_t k = 0; k < q; ++k) {
    const double w = static_cast<double>(bins[k].pair_count);
    sn += w;
    sh += w * bins[k].lag_m;
    shh += w * bins[k].lag_m * bins[k].lag_m;
    sg += w * bins[k].gamma;
    shg += w * bins[k].lag_m * bins[k].gamma;
  }
  std::vector<LineFit> fits;
  const double det = sn * shh - sh * sh;
  if (det > 1e-12 * sn * shh) {
    fits.push_back({(shh * sg - sh * shg) / det, (sn * shg - sh * sg) / det});
  }
  if (shh > 0.0) fits.push_back({0.0, shg / shh});
  return fits;
}

/// Pair-count-weighted least squares for (nugget, sill) at a fixed range
/// over the non-negative quadrant; used by the fallback range search.
double nugget_sill_sse(const std::vector<VariogramBin>& bins, double range,
                       double* nugget_out = nullptr,
                       double* sill_out = nullptr) {
  double sn = 0.0, sa = 0.0, saa = 0.0, sg = 0.0, sag = 0.0;
  for (const VariogramBin& b : bins) {
    const double w = static_cast<double>(b.pair_count);
    const double a = std::min(b.lag_m / range, 1.0);
    sn += w;
    sa += w * a;
    saa += w * a * a;
    sg += w * b.gamma;
    sag += w * a * b.gamma;
  }
  double best_sse = std::numeric_limits<double>::infinity();
  double best_n = 0.0, best_s = 0.0;
  const auto consider = [&](double nugget, double sill) {
    if (nugget < 0.0 || sill < 0.0) return;
    const double sse = weighted_sse(bins, nugget, sill, range);
    if (sse < best_sse) {
      best_sse = sse;
      best_n = nugget;
      best_s = sill;
    }
  };
  const double det = sn * saa - sa * sa;
  if (det > 1e-12 * sn * saa) {
    consider((saa * sg - sa * sag) / det, (sn * sag - sa * sg) / det);
  }
  if (saa > 0.0) consider(0.0, std::max(sag / saa, 0.0));
  consider(std::max(sg / sn, 0.0), 0.0);
  if (nugget_out) *nugget_out = best_n;
  if (sill_out) *sill_out = best_s;
  return best_sse;
}

}  // namespace

// The model is piecewise linear in h with one breakpoint, so conditioning
// on which bins sit below the range makes the problem linear: the rising
// line (intercept = nugget, slope = sill/range) fits bins below the split
// and the plateau level fits the rest independently. Scanning all splits
// gives the exact optimum whenever it is interior; a dense range sweep
// plus golden-section refinement covers constrained corner cases.
VariogramFit fit_linear(const ExperimentalVariogram& ev) {
  if (ev.bins.size() < 3) {
    throw InsufficientData("fit_linear: need >= 3 variogram bins");
  }
  const std::vector<VariogramBin>& bins = ev.bins;
  const std::size_t m = bins.size();
  const double max_lag = ev.max_bin_lag();
  double gamma_max = 0.0;
  double sn = 0.0, sg = 0.0;
  for (const VariogramBin& b : bins) {
    gamma_max = std::max(gamma_max, b.gamma);
    sn += static_cast<double>(b.pair_count);
    sg += static_cast<double>(b.pair_count) * b.gamma;
  }
  if (gamma_max == 0.0) {
    return {{0.0, max_lag, 0.0}, true, 0.0};
  }

  VariogramParams best{std::max(sg / sn, 0.0), max_lag, 0.0};  // flat start
  double best_sse = weighted_sse(bins, best.nugget, best.sill, best.range_m);
  const auto consider = [&](double nugget, double range, double sill) {
    if (nugget < 0.0 || sill < 0.0 || !(range > 0.0) || range > max_lag) return;
    const double sse = weighted_sse(bins, nugget, sill, range);
    if (sse < best_sse) {
      best = {nugget, range, sill};
      best_sse = sse;
    }
  };

  // Range pinned at the last bin lag: a pure rising line.
  for (const LineFit& line : line_fits(bins, m)) {
    if (line.slope > 0.0) {
      consider(line.intercept, max_lag, line.slope * max_lag);
    }
  }

  // Interior breakpoints: line over bins [0, q), plateau over the rest.
  for (std::size_t q = 2; q < m; ++q) {
    double pn = 0.0, pg = 0.0;
    for (std::size_t k = q; k < m; ++k) {
      pn += static_cast<double>(bins[k].pair_count);
      pg += static_cast<double>(bins[k].pair_count) * bins[k].gamma;
    }
    const double plateau = pg / pn;
    for (const LineFit& line : line_fits(bins, q)) {
      if (line.slope <= 0.0) continue;
      const double range = (plateau - line.intercept) / line.slope;
      if (range > bins[q - 1].lag_m && range <= bins[q].lag_m) {
        consider(line.intercept, range, plateau - line.intercept);
      }
    }
  }

  // Fallback sweep for optima pinned to the constraint boundary.
  constexpr int kSweep = 256;
  double sweep_best_range = max_lag;
  double sweep_best_sse = std::numeric_limits<double>::infinity();
  for (int k = 1; k <= kSweep; ++k) {
    const double range = max_lag * static_cast<double>(k) / kSweep;
    const double sse = nugget_sill_sse(bins, range);
    if (sse < sweep_best_sse) {
      sweep_best_sse = sse;
      sweep_best_range = range;
    }
  }
  double lo = std::max(sweep_best_range - max_lag / kSweep, 1e-9 * max_lag);
  double hi = std::min(sweep_best_range + max_lag / kSweep, max_lag);
  constexpr double kGolden = 0.6180339887498949;
  double x1 = hi - kGolden * (hi - lo);
  double x2 = lo + kGolden * (hi - lo);
  double f1 = nugget_sill_sse(bins, x1);
  double f2 = nugget_sill_sse(bins, x2);
  for (int it = 0; it < 90 && hi - lo > 1e-11 * max_lag; ++it) {
    if (f1 <= f2) {
      hi = x2;
      x2 = x1;
      f2 = f1;
      x1 = hi - kGolden * (hi - lo);
      f1 = nugget_sill_sse(bins, x1);
    } else {
      lo = x1;
      x1 = x2;
      f1 = f2;
      x2 = lo + kGolden * (hi - lo);
      f2 = nugget_sill_sse(bins, x2);
    }
  }
  const double polished = 0.5 * (lo + hi);
  double pn = 0.0, ps = 0.0;
  nugget_sill_sse(bins, polished, &pn, &ps);
  consider(pn, polished, ps);

  const bool degenerate = best.sill <= 1e-10 * gamma_max;
  if (degenerate) best.range_m = max_lag;  // range is unidentifiable then
  return {best, degenerate, best_sse};
}

VariogramParams with_min_range(const VariogramParams& params,
                               double min_range_m) {
  params.validate();
  if (!(min_range_m > 0.0)) {
    throw InvalidArgument("with_min_range: minimum range must be positive");
  }
  if (params.range_m >= min_range_m) return params;
  const double slope = params.sill / params.range_m;
  return {params.nugget, min_range_m, slope * min_range_m};
}

}  // namespace soilmap
