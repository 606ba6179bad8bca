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

#include "soilmap/simulation.hpp"

#include <Eigen/Cholesky>
#include <algorithm>
#include <cmath>
#include <string>

namespace soilmap {

namespace {

constexpr int kMaxSurrogateCells = 2000;
constexpr double kCovarianceJitter = 1e-8;
constexpr int kMinSamplesForFit = 3;

/// Distinct sub-streams from one run seed (splitmix64 step).
std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t stream) {
  std::uint64_t z = seed + stream * 0x9E3779B97F4A7C15ULL;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

}  // namespace

SurrogateField generate_surrogate(const FieldGrid& grid, const LayerSpec& spec,
                                  std::span<const VariogramParams> layer_variograms,
                                  std::span<const double> depth_trend_kpa,
                                  std::uint64_t seed) {
  spec.validate();
  if (static_cast<int>(layer_variograms.size()) != spec.count ||
      static_cast<int>(depth_trend_kpa.size()) != spec.count) {
    throw InvalidArgument(
        "generate_surrogate: need one variogram and one trend offset per layer");
  }
  const int n = grid.reachable_count();
  if (n > kMaxSurrogateCells) {
    throw InvalidArgument("generate_surrogate: " + std::to_string(n) +
                          " cells exceeds the dense-factorization limit of " +
                          std::to_string(kMaxSurrogateCells));
  }
  const std::vector<CellIndex>& cells = grid.reachable_cells();

  SurrogateField field{grid, {}, SurrogateMode::synthetic, seed, {}};
  field.truth.reserve(static_cast<std::size_t>(spec.count));
  Rng rng(mix_seed(seed, 0));

  Eigen::LLT<Matrix> llt;
  for (int k = 0; k < spec.count; ++k) {
    const VariogramParams& p = layer_variograms[static_cast<std::size_t>(k)];
    p.validate();
    const bool reuse_factor =
        k > 0 && [&] {
          const VariogramParams& prev =
              layer_variograms[static_cast<std::size_t>(k - 1)];
          return prev.nugget == p.nugget && prev.range_m == p.range_m &&
                 prev.sill == p.sill;
        }();
    if (!reuse_factor) {
      const double plateau = p.nugget + p.sill;
      Matrix cov(n, n);
      for (int a = 0; a < n; ++a) {
        cov(a, a) = plateau + kCovarianceJitter;
        const Location ca = grid.cell_center(cells[static_cast<std::size_t>(a)]);
        for (int b = a + 1; b < n; ++b) {
          const Location cb =
              grid.cell_center(cells[static_cast<std::size_t>(b)]);
          const double c = plateau - semivariance(p, distance(ca, cb));
          cov(a, b) = c;
          cov(b, a) = c;
        }
      }
      llt.compute(cov);
      if (llt.info() != Eigen::Success) {
        throw GenerationError(
            "generate_surrogate: covariance for layer " + std::to_string(k) +
            " is not positive definite (try a larger nugget)");
      }
    }
    Vector normals(n);
    for (int a = 0; a < n; ++a) normals[a] = rng.normal();
    const Vector draw = llt.matrixL() * normals;

    GridArray layer = grid.make_grid();
    const double trend = depth_trend_kpa[static_cast<std::size_t>(k)];
    for (int a = 0; a < n; ++a) {
      const CellIndex c = cells[static_cast<std::size_t>(a)];
      layer(c.j, c.i) = std::max(draw[a] + trend, 0.0);
    }
    field.truth.push_back(std::move(layer));
  }
  return field;
}

Sample sample_at(const SurrogateField& field, CellIndex cell,
                 double noise_sd_kpa, Rng& rng, int id) {
  if (!field.grid.is_reachable(cell)) {
    throw InvalidArgument("sample_at: cell (" + std::to_string(cell.i) + ", " +
                          std::to_string(cell.j) + ") is not reachable");
  }
  const int m = static_cast<int>(field.truth.size());
  Vector values(m);
  for (int k = 0; k < m; ++k) {
    double v = field.truth[static_cast<std::size_t>(k)](cell.j, cell.i);
    if (noise_sd_kpa > 0.0) v += noise_sd_kpa * rng.normal();
    values[k] = std::max(v, 0.0);
  }
  return {id, field.grid.cell_center(cell), std::nullopt, std::move(values)};
}

ModelError model_error(const LayeredModel& model, const SurrogateField& field) {
  const int m = static_cast<int>(model.layers.size());
  if (m != static_cast<int>(field.truth.size())) {
    throw InvalidArgument("model_error: layer count mismatch");
  }
  const std::vector<CellIndex>& cells = field.grid.reachable_cells();
  ModelError err;
  err.per_layer_mse = Vector::Zero(m);
  for (int k = 0; k < m; ++k) {
    double acc = 0.0;
    for (const CellIndex c : cells) {
      const double d = model.layers[static_cast<std::size_t>(k)].estimates(c.j, c.i) -
                       field.truth[static_cast<std::size_t>(k)](c.j, c.i);
      acc += d * d;
    }
    err.per_layer_mse[k] = acc / static_cast<double>(cells.size());
  }
  err.mse = err.per_layer_mse.mean();
  err.rmse = std::sqrt(err.mse);
  return err;
}

double kv_mse_correlation(const RunRecord& record) {
  const Eigen::Index n = record.kv_trace.size();
  if (n != record.sqerr_trace.size()) {
    throw InvalidArgument("kv_mse_correlation: trace shape mismatch");
  }
  if (n < 2) {
    throw UndefinedCorrelation("kv_mse_correlation: need >= 2 trace entries");
  }
  const Eigen::Map<const Vector> x(record.kv_trace.data(), n);
  const Eigen::Map<const Vector> y(record.sqerr_trace.data(), n);
  const double mx = x.mean();
  const double my = y.mean();
  const double sxx = (x.array() - mx).square().sum();
  const double syy = (y.array() - my).square().sum();
  if (sxx <= 0.0 || syy <= 0.0) {
    throw UndefinedCorrelation(
        "kv_mse_correlation: a trace has zero variance");
  }
  const double sxy = ((x.array() - mx) * (y.array() - my)).sum();
  return sxy / std::sqrt(sxx * syy);
}

namespace {

/// Per-layer sample views for variogram fitting.
std::vector<PointValue> layer_points(std::span<const Sample> samples, int k) {
  std::vector<PointValue> pts;
  pts.reserve(samples.size());
  for (const Sample& s : samples) pts.push_back({s.location, s.layer_values[k]});
  return pts;
}

}  // namespace

RunRecord run_exploration(const StrategyConfig& strategy,
                          const SurrogateField& field,
                          const SimulationSettings& settings,
                          std::uint64_t seed) {
  strategy.validate();
  settings.layers.validate();
  settings.variogram.prior.validate();
  if (strategy.budget < 3) {
    throw InvalidArgument("run_exploration: budget must be >= 3 to fit a model");
  }
  const FieldGrid& grid = field.grid;
  if (strategy.budget > grid.reachable_count()) {
    throw InvalidArgument("run_exploration: budget exceeds reachable cells");
  }
  if (static_cast<int>(field.truth.size()) != settings.layers.count) {
    throw InvalidArgument("run_exploration: field/layer-spec layer mismatch");
  }

  const int m = settings.layers.count;
  Rng rng(mix_seed(seed, 1));
  const Location start = settings.start;
  // Models whose plateau falls inside the field are not valid planar
  // covariance structures and can krige to negative variances, so every
  // parameter set entering the solver gets its range extended past the
  // longest in-field distance.
  const double field_span = std::hypot(grid.extent_x(), grid.extent_y());

  // Standing plan for area-coverage and adaptive strategies.
  Plan plan{{}, start};
  const StrategyKind plan_kind =
      is_adaptive(strategy.kind) ? strategy.initial_plan : strategy.kind;
  if (!is_next_best_view(strategy.kind)) {
    switch (plan_kind) {
      case StrategyKind::random:
        plan = plan_random(grid, strategy.budget, mix_seed(seed, 2), start);
        break;
      case StrategyKind::w_shape:
        plan = plan_w_shape(grid, strategy.budget, start);
        break;
      case StrategyKind::area_split:
        plan = plan_area_split(grid, strategy.budget, start);
        break;
      default:
        throw InvalidArgument("run_exploration: bad initial plan kind");
    }
  }

  RunRecord record;
  record.strategy = strategy;
  record.seed = seed;
  record.start = start;
  record.initial_plan = plan;

  CellFlags visited = make_cell_flags(grid);
  std::vector<VariogramParams> params(
      static_cast<std::size_t>(m),
      with_min_range(settings.variogram.prior, field_span));
  // KV surface the first target selection sees, before any model exists:
  // uniform over reachable cells (greedy then picks (0, 0) by tie-break,
  // Monte Carlo picks uniformly).
  GridArray kv_grid = grid.make_grid(1.0);

  std::vector<Vector> kv_rows;
  std::vector<Vector> sqerr_rows;
  Location cursor = start;
  double cum_path = 0.0;
  LayeredModel model;

  for (int step = 1; static_cast<int>(record.samples.size()) < strategy.budget;
       ++step) {
    CellIndex target;
    if (strategy.kind == StrategyKind::greedy) {
      target = next_greedy(kv_grid, grid, visited);
    } else if (strategy.kind == StrategyKind::monte_carlo) {
      target = next_monte_carlo(kv_grid, grid, visited,
                                strategy.candidate_count, rng);
    } else {
      if (plan.route.empty()) {
        if (!is_adaptive(strategy.kind)) {
          break;  // coverage plan exhausted (collapsed duplicates)
        }
        // Adaptation can prune a plan down to nothing before the budget
        // runs out; reseed with the current best cell.
        plan.route.push_back(next_greedy(kv_grid, grid, visited));
      }
      target = plan.route.front();
      plan.route.erase(plan.route.begin());
    }

    cum_path += distance(cursor, grid.cell_center(target));
    cursor = grid.cell_center(target);
    visited[flag_index(grid, target)] = 1;
    record.samples.push_back(
        sample_at(field, target, settings.noise_sd_kpa, rng, step));

    // Model update. Layers refit their variograms from all samples so far
    // unless frozen; fits that fail or degenerate keep the previous params.
    if (!settings.variogram.freeze &&
        static_cast<int>(record.samples.size()) >= kMinSamplesForFit) {
      for (int k = 0; k < m; ++k) {
        const std::vector<PointValue> pts = layer_points(record.samples, k);
        try {
          const VariogramFit fit = fit_linear(experimental_semivariogram(
              pts, settings.variogram.bin_width_m, settings.variogram.max_lag_m));
          if (!fit.degenerate) {
            params[static_cast<std::size_t>(k)] =
                with_min_range(fit.params, field_span);
          }
        } catch (const InsufficientData&) {
          // keep previous params until enough bins accumulate
        }
      }
    }
    try {
      model = build_layered_model(record.samples, grid, settings.layers, params);
    } catch (const Error& e) {
      throw RuntimeError("run_exploration step " + std::to_string(step) + ": " +
                         e.what());
    }
    kv_grid = model.mean_kv_grid;

    const ModelError err = model_error(model, field);
    record.steps.push_back({step, step, target, cursor, cum_path, err.mse,
                            err.rmse, model.mean_kv});

    const std::vector<CellIndex>& cells = grid.reachable_cells();
    Vector kv_row(static_cast<Eigen::Index>(cells.size()));
    Vector sq_row(static_cast<Eigen::Index>(cells.size()));
    for (std::size_t c = 0; c < cells.size(); ++c) {
      const CellIndex cell = cells[c];
      kv_row[static_cast<Eigen::Index>(c)] = kv_grid(cell.j, cell.i);
      double acc = 0.0;
      for (int k = 0; k < m; ++k) {
        const double d =
            model.layers[static_cast<std::size_t>(k)].estimates(cell.j, cell.i) -
            field.truth[static_cast<std::size_t>(k)](cell.j, cell.i);
        acc += d * d;
      }
      sq_row[static_cast<Eigen::Index>(c)] = acc / m;
    }
    kv_rows.push_back(std::move(kv_row));
    sqerr_rows.push_back(std::move(sq_row));

    // Plan adaptation happens on the model the new sample produced.
    if (is_adaptive(strategy.kind) && !plan.route.empty() &&
        static_cast<int>(record.samples.size()) < strategy.budget) {
      plan.origin = cursor;
      plan = strategy.kind == StrategyKind::adaptive_greedy
                 ? adapt_plan_greedy(plan, kv_grid, grid, visited)
                 : adapt_plan_mc(plan, kv_grid, grid, visited,
                                 strategy.candidate_count, rng);
    }
  }

  record.kv_trace.resize(static_cast<Eigen::Index>(kv_rows.size()),
                         kv_rows.empty() ? 0 : kv_rows.front().size());
  record.sqerr_trace.resizeLike(record.kv_trace);
  for (std::size_t r = 0; r < kv_rows.size(); ++r) {
    record.kv_trace.row(static_cast<Eigen::Index>(r)) = kv_rows[r].transpose();
    record.sqerr_trace.row(static_cast<Eigen::Index>(r)) =
        sqerr_rows[r].transpose();
  }
  record.final_model = std::move(model);
  return record;
}

std::vector<ComparisonRow> compare_strategies(
    std::span<const StrategyConfig> strategies, const SurrogateField& field,
    const SimulationSettings& settings, std::span<const int> budgets,
    std::span<const std::uint64_t> seeds) {
  if (strategies.empty() || seeds.empty()) {
    throw InvalidArgument("compare_strategies: need >= 1 strategy and seed");
  }
  std::vector<ComparisonRow> rows;
  for (const StrategyConfig& base : strategies) {
    std::vector<int> effective(budgets.begin(), budgets.end());
    if (effective.empty()) effective.push_back(base.budget);
    for (const int budget : effective) {
      StrategyConfig cfg = base;
      cfg.budget = budget;
      ComparisonRow row{cfg.kind, budget, 0.0, 0.0, 0.0, 0};
      for (const std::uint64_t seed : seeds) {
        const RunRecord rec = run_exploration(cfg, field, settings, seed);
        if (rec.steps.empty()) continue;
        row.mean_rmse_kpa += rec.steps.back().rmse;
        row.mean_path_m += rec.steps.back().cumulative_path_m;
        row.mean_final_kv += rec.steps.back().kv;
        row.runs += 1;
      }
      if (row.runs > 0) {
        row.mean_rmse_kpa /= row.runs;
        row.mean_path_m /= row.runs;
        row.mean_final_kv /= row.runs;
      }
      rows.push_back(row);
    }
  }
  return rows;
}

}  // namespace soilmap
