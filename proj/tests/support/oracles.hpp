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

// Independent reference implementations for checking the library. Nothing
// here may call into the code under test: plain loops and hand-rolled
// linear algebra only.

#ifndef SOILMAP_TESTS_ORACLES_HPP
#define SOILMAP_TESTS_ORACLES_HPP

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <numeric>
#include <stdexcept>
#include <vector>

namespace oracles {

/// Gaussian elimination with partial pivoting on a dense system.
inline std::vector<double> gauss_solve(std::vector<std::vector<double>> a,
                                       std::vector<double> b) {
  const std::size_t n = a.size();
  for (std::size_t col = 0; col < n; ++col) {
    std::size_t pivot = col;
    for (std::size_t r = col + 1; r < n; ++r) {
      if (std::abs(a[r][col]) > std::abs(a[pivot][col])) pivot = r;
    }
    if (std::abs(a[pivot][col]) < 1e-300) {
      throw std::runtime_error("gauss_solve: singular matrix");
    }
    std::swap(a[col], a[pivot]);
    std::swap(b[col], b[pivot]);
    for (std::size_t r = col + 1; r < n; ++r) {
      const double f = a[r][col] / a[col][col];
      for (std::size_t c = col; c < n; ++c) a[r][c] -= f * a[col][c];
      b[r] -= f * b[col];
    }
  }
  std::vector<double> x(n, 0.0);
  for (std::size_t r = n; r-- > 0;) {
    double acc = b[r];
    for (std::size_t c = r + 1; c < n; ++c) acc -= a[r][c] * x[c];
    x[r] = acc / a[r][r];
  }
  return x;
}

/// The piecewise-linear semivariogram, restated independently.
inline double linear_gamma(double nugget, double range, double sill, double h) {
  if (h == 0.0) return 0.0;
  if (h < range) return nugget + sill * h / range;
  return nugget + sill;
}

struct Point {
  double x, y;
};

inline double dist(const Point& a, const Point& b) {
  return std::sqrt((a.x - b.x) * (a.x - b.x) + (a.y - b.y) * (a.y - b.y));
}

struct OkSolution {
  std::vector<double> weights;
  double lagrange;
  double variance;
};

/// Full augmented ordinary-kriging solve: weights, Lagrange multiplier and
/// prediction variance sum(w gamma) + lambda.
inline OkSolution ok_solve(const std::vector<Point>& samples, double nugget,
                           double range, double sill, const Point& target) {
  const std::size_t n = samples.size();
  std::vector<std::vector<double>> a(n + 1, std::vector<double>(n + 1, 0.0));
  std::vector<double> b(n + 1, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      a[i][j] = linear_gamma(nugget, range, sill, dist(samples[i], samples[j]));
    }
    a[i][n] = 1.0;
    a[n][i] = 1.0;
    b[i] = linear_gamma(nugget, range, sill, dist(samples[i], target));
  }
  b[n] = 1.0;
  const std::vector<double> x = gauss_solve(a, b);
  OkSolution sol;
  sol.weights.assign(x.begin(), x.begin() + static_cast<std::ptrdiff_t>(n));
  sol.lagrange = x[n];
  sol.variance = sol.lagrange;
  for (std::size_t i = 0; i < n; ++i) sol.variance += sol.weights[i] * b[i];
  return sol;
}

/// Shortest open path over all target permutations (origin fixed first).
inline double best_open_path(const Point& origin, std::vector<Point> targets) {
  std::vector<std::size_t> idx(targets.size());
  std::iota(idx.begin(), idx.end(), 0);
  std::sort(idx.begin(), idx.end());
  double best = std::numeric_limits<double>::infinity();
  do {
    double len = dist(origin, targets[idx[0]]);
    for (std::size_t k = 1; k < idx.size(); ++k) {
      len += dist(targets[idx[k - 1]], targets[idx[k]]);
    }
    best = std::min(best, len);
  } while (std::next_permutation(idx.begin(), idx.end()));
  return best;
}

inline double pearson(const std::vector<double>& x,
                      const std::vector<double>& y) {
  const double n = static_cast<double>(x.size());
  const double mx = std::accumulate(x.begin(), x.end(), 0.0) / n;
  const double my = std::accumulate(y.begin(), y.end(), 0.0) / n;
  double sxx = 0.0, syy = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    syy += (y[i] - my) * (y[i] - my);
    sxy += (x[i] - mx) * (y[i] - my);
  }
  return sxy / std::sqrt(sxx * syy);
}

}  // namespace oracles

#endif  // SOILMAP_TESTS_ORACLES_HPP
