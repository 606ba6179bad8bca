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

#include "soilmap/kriging.hpp"

#include <cmath>
#include <limits>
#include <string>

namespace soilmap {

namespace {

constexpr double kWeightSumTol = 1e-9;
constexpr double kVarianceClampTol = 1e-9;
constexpr double kRcondFloor = 1e-14;

double checked_variance(double var, const std::string& where) {
  if (var < -kVarianceClampTol) {
    throw RuntimeError(where + ": kriging variance " + std::to_string(var) +
                       " below clamp tolerance");
  }
  return std::max(var, 0.0);
}

/// Weight columns and raw variances for every reachable cell of a grid.
struct CellSolve {
  Matrix sols;      // (n+1) x C stacked [w; lambda]
  Vector variance;  // C, unclamped
};

CellSolve solve_cells(const KrigingSystem& system, const FieldGrid& grid) {
  const std::vector<CellIndex>& cells = grid.reachable_cells();
  std::vector<Location> centers(cells.size());
  for (std::size_t c = 0; c < cells.size(); ++c) {
    centers[c] = grid.cell_center(cells[c]);
  }
  const Matrix rhs = system.rhs_all(centers);
  Matrix sols = system.solve_all(centers);
  // sum(w_i gamma_i0) + lambda falls out of one column dot because the
  // RHS bottom entry is 1 and the solution bottom entry is lambda.
  const Vector variance = (rhs.array() * sols.array()).colwise().sum();
  const Vector wsum = sols.topRows(system.sample_count()).colwise().sum();
  for (std::size_t c = 0; c < cells.size(); ++c) {
    if (std::abs(wsum[static_cast<Eigen::Index>(c)] - 1.0) > kWeightSumTol) {
      throw SingularMatrix("kriging at cell (" + std::to_string(cells[c].i) +
                           ", " + std::to_string(cells[c].j) +
                           "): weights failed to normalize");
    }
  }
  return {std::move(sols), variance};
}

LayerMap assemble_layer(const FieldGrid& grid, const CellSolve& cs,
                        const Vector& values, const VariogramParams& params) {
  const std::vector<CellIndex>& cells = grid.reachable_cells();
  const int n = static_cast<int>(values.size());
  LayerMap map{grid.make_grid(), grid.make_grid(), params, {}};
  const Vector est = cs.sols.topRows(n).transpose() * values;
  for (std::size_t c = 0; c < cells.size(); ++c) {
    const Eigen::Index ci = static_cast<Eigen::Index>(c);
    map.estimates(cells[c].j, cells[c].i) = est[ci];
    map.variances(cells[c].j, cells[c].i) = checked_variance(
        cs.variance[ci], "kriging at cell (" + std::to_string(cells[c].i) +
                             ", " + std::to_string(cells[c].j) + ")");
  }
  return map;
}

bool same_params(const VariogramParams& a, const VariogramParams& b) {
  return a.nugget == b.nugget && a.range_m == b.range_m && a.sill == b.sill;
}

}  // namespace

KrigingSystem::KrigingSystem(std::span<const Location> sample_locs,
                             const VariogramParams& params)
    : locs_(sample_locs.begin(), sample_locs.end()), params_(params) {
  params_.validate();
  const int n = static_cast<int>(locs_.size());
  if (n < 1) throw InvalidArgument("KrigingSystem: need >= 1 sample");
  for (const Location& l : locs_) {
    if (!std::isfinite(l.x) || !std::isfinite(l.y)) {
      throw InvalidArgument("KrigingSystem: sample locations must be finite");
    }
  }
  Matrix a = Matrix::Zero(n + 1, n + 1);
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      const double g = semivariance(params_, distance(locs_[i], locs_[j]));
      a(i, j) = g;
      a(j, i) = g;
    }
    a(i, n) = 1.0;
    a(n, i) = 1.0;
  }
  lu_.compute(a);
  if (!(lu_.rcond() > kRcondFloor)) {
    throw SingularMatrix(
        "KrigingSystem: augmented system is numerically singular "
        "(duplicate sample locations with zero nugget?)");
  }
}

Vector KrigingSystem::gamma_to(const Location& target) const {
  const int n = sample_count();
  Vector g(n);
  for (int i = 0; i < n; ++i) {
    g[i] = semivariance(params_, distance(locs_[i], target));
  }
  return g;
}

KrigingSolution KrigingSystem::solve(const Location& target) const {
  const int n = sample_count();
  Vector rhs(n + 1);
  rhs.head(n) = gamma_to(target);
  rhs[n] = 1.0;
  const Vector sol = lu_.solve(rhs);
  KrigingSolution out{sol.head(n), sol[n]};
  if (std::abs(out.weights.sum() - 1.0) > kWeightSumTol) {
    throw SingularMatrix("KrigingSystem: weights failed to normalize");
  }
  return out;
}

Matrix KrigingSystem::rhs_all(std::span<const Location> targets) const {
  const int n = sample_count();
  const int t = static_cast<int>(targets.size());
  Matrix rhs(n + 1, t);
  for (int c = 0; c < t; ++c) {
    for (int i = 0; i < n; ++i) {
      rhs(i, c) = semivariance(params_, distance(locs_[i], targets[c]));
    }
    rhs(n, c) = 1.0;
  }
  return rhs;
}

Matrix KrigingSystem::solve_all(std::span<const Location> targets) const {
  return lu_.solve(rhs_all(targets));
}

KrigingSolution solve_weights(std::span<const Location> sample_locs,
                              const VariogramParams& params,
                              const Location& target) {
  return KrigingSystem(sample_locs, params).solve(target);
}

double estimate(const KrigingSolution& sol, const Vector& values) {
  if (values.size() != sol.weights.size()) {
    throw InvalidArgument("estimate: weight/value length mismatch");
  }
  return sol.weights.dot(values);
}

double variance(const KrigingSolution& sol, const Vector& gamma_to_target) {
  if (gamma_to_target.size() != sol.weights.size()) {
    throw InvalidArgument("variance: weight/semivariance length mismatch");
  }
  return checked_variance(sol.weights.dot(gamma_to_target) + sol.lagrange,
                          "variance");
}

LayerMap krige_layer(const std::vector<PointValue>& samples,
                     const VariogramParams& params, const FieldGrid& grid) {
  if (samples.empty()) throw InvalidArgument("krige_layer: need >= 1 sample");
  const std::vector<PointValue> pts = dedup_by_location(samples);
  std::vector<Location> locs(pts.size());
  Vector values(static_cast<Eigen::Index>(pts.size()));
  for (std::size_t i = 0; i < pts.size(); ++i) {
    locs[i] = pts[i].loc;
    values[static_cast<Eigen::Index>(i)] = pts[i].value;
  }
  const KrigingSystem system(locs, params);
  return assemble_layer(grid, solve_cells(system, grid), values, params);
}

LayeredModel build_layered_model(std::span<const Sample> samples,
                                 const FieldGrid& grid, const LayerSpec& spec,
                                 std::span<const VariogramParams> params_per_layer) {
  spec.validate();
  if (samples.empty()) {
    throw InvalidArgument("build_layered_model: need >= 1 sample");
  }
  if (static_cast<int>(params_per_layer.size()) != spec.count) {
    throw InvalidArgument(
        "build_layered_model: need one parameter set per layer");
  }
  std::vector<int> ids;
  ids.reserve(samples.size());
  for (const Sample& s : samples) {
    if (s.layer_values.size() != spec.count) {
      throw InvalidArgument("build_layered_model: sample " +
                            std::to_string(s.id) + " has " +
                            std::to_string(s.layer_values.size()) +
                            " layer values, expected " +
                            std::to_string(spec.count));
    }
    ids.push_back(s.id);
  }

  // Merge duplicate locations once for all layers: layer values average
  // elementwise, so every layer sees the same geometry.
  std::vector<PointValue> tags;
  tags.reserve(samples.size());
  for (const Sample& s : samples) tags.push_back({s.location, 0.0});
  const std::vector<PointValue> unique_pts = dedup_by_location(tags);
  const int n = static_cast<int>(unique_pts.size());
  std::vector<Location> locs(unique_pts.size());
  for (std::size_t i = 0; i < unique_pts.size(); ++i) locs[i] = unique_pts[i].loc;
  Matrix values = Matrix::Zero(n, spec.count);
  Vector hits = Vector::Zero(n);
  for (const Sample& s : samples) {
    int slot = -1;
    for (int i = 0; i < n; ++i) {
      if (locs[static_cast<std::size_t>(i)].x == s.location.x &&
          locs[static_cast<std::size_t>(i)].y == s.location.y) {
        slot = i;
        break;
      }
    }
    values.row(slot) += s.layer_values.transpose();
    hits[slot] += 1.0;
  }
  for (int i = 0; i < n; ++i) values.row(i) /= hits[i];

  LayeredModel model;
  model.layers.reserve(static_cast<std::size_t>(spec.count));
  model.mean_kv_grid = grid.make_grid();

  // Layers with identical params share geometry-only work: one
  // factorization, one batch solve, one variance surface.
  CellSolve cached;
  for (int k = 0; k < spec.count; ++k) {
    const VariogramParams& p = params_per_layer[static_cast<std::size_t>(k)];
    if (k == 0 || !same_params(p, params_per_layer[static_cast<std::size_t>(k - 1)])) {
      cached = solve_cells(KrigingSystem(locs, p), grid);
    }
    model.layers.push_back(assemble_layer(grid, cached, values.col(k), p));
    model.layers.back().sample_ids = ids;
  }

  const std::vector<CellIndex>& cells = grid.reachable_cells();
  double total = 0.0;
  for (const CellIndex c : cells) {
    double acc = 0.0;
    for (const LayerMap& layer : model.layers) acc += layer.variances(c.j, c.i);
    const double mean_var = acc / spec.count;
    model.mean_kv_grid(c.j, c.i) = mean_var;
    total += mean_var;
  }
  model.mean_kv = total / grid.reachable_count();
  return model;
}

}  // namespace soilmap
