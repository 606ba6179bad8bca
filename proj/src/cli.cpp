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

#include "soilmap/cli.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <ostream>

#include "soilmap/config.hpp"
#include "soilmap/csv.hpp"

namespace soilmap::cli {

namespace {

void ensure_dir(const std::string& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw IoError("cannot create directory '" + dir + "'");
}

std::string join(const std::string& dir, const std::string& name) {
  return (std::filesystem::path(dir) / name).string();
}

RunConfig load_or_default(const std::string& config_path) {
  return config_path.empty() ? demo_config() : load_config(config_path);
}

void write_model_grids(const LayeredModel& model, const std::string& dir) {
  for (std::size_t k = 0; k < model.layers.size(); ++k) {
    export_grid_csv(model.layers[k].estimates,
                    join(dir, "estimate_" + std::to_string(k) + ".csv"));
    export_grid_csv(model.layers[k].variances,
                    join(dir, "variance_" + std::to_string(k) + ".csv"));
  }
  export_grid_csv(model.mean_kv_grid, join(dir, "mean_kv.csv"));
}

/// Fit each layer's variogram from the samples, keeping the configured
/// prior where a fit is impossible or degenerate. Ranges extend past the
/// field span before kriging (shorter plateaus are not valid planar
/// models and can produce negative variances).
std::vector<VariogramParams> fit_layer_params(
    const std::vector<Sample>& samples, const FieldGrid& grid,
    const SimulationSettings& settings, std::ostream& out) {
  const double field_span = std::hypot(grid.extent_x(), grid.extent_y());
  std::vector<VariogramParams> params(
      static_cast<std::size_t>(settings.layers.count),
      with_min_range(settings.variogram.prior, field_span));
  for (int k = 0; k < settings.layers.count; ++k) {
    std::vector<PointValue> pts;
    pts.reserve(samples.size());
    for (const Sample& s : samples) pts.push_back({s.location, s.layer_values[k]});
    try {
      const VariogramFit fit = fit_linear(experimental_semivariogram(
          pts, settings.variogram.bin_width_m, settings.variogram.max_lag_m));
      if (fit.degenerate) {
        out << "layer " << k << ": degenerate variogram fit, keeping prior\n";
      } else {
        params[static_cast<std::size_t>(k)] =
            with_min_range(fit.params, field_span);
      }
    } catch (const InsufficientData& e) {
      out << "layer " << k << ": " << e.what() << ", keeping prior\n";
    }
  }
  return params;
}

}  // namespace

void run_fit_variogram(const FitVariogramArgs& args, std::ostream& out) {
  LayerSpec layers;
  double depth_step_cm = 50.0 / 300.0;
  double bin_width = args.bin_width_m;
  double max_lag = args.max_lag_m;
  if (args.config_path.empty()) {
    // Standalone mode: take the layer count from the pre-aggregated header.
    std::ifstream in(args.samples_path);
    if (!in) throw NotFound("cannot open '" + args.samples_path + "'");
    std::string header;
    std::getline(in, header);
    const long v_cols = std::count(header.begin(), header.end(), ',') - 2;
    if (header.find(",v0") == std::string::npos || v_cols < 1) {
      throw ValidationError(
          "fit-variogram: raw-profile samples need --config for the layer "
          "spec and depth step");
    }
    layers = {static_cast<int>(v_cols), 5.0};
    if (!(bin_width > 0.0) || !(max_lag > 0.0)) {
      throw ValidationError(
          "fit-variogram: --bin-width and --max-lag are required without "
          "--config");
    }
  } else {
    const RunConfig cfg = load_config(args.config_path);
    layers = cfg.layers;
    depth_step_cm = cfg.profile_depth_step_cm;
    const FieldGrid grid = make_grid(cfg);
    const SimulationSettings settings = make_settings(cfg, grid);
    if (!(bin_width > 0.0)) bin_width = settings.variogram.bin_width_m;
    if (!(max_lag > 0.0)) max_lag = settings.variogram.max_lag_m;
  }

  const std::vector<Sample> samples =
      load_samples_csv(args.samples_path, layers, depth_step_cm);
  if (args.layer < 0 || args.layer >= layers.count) {
    throw InvalidArgument("fit-variogram: layer index out of range");
  }
  std::vector<PointValue> pts;
  pts.reserve(samples.size());
  for (const Sample& s : samples) {
    pts.push_back({s.location, s.layer_values[args.layer]});
  }

  const ExperimentalVariogram ev =
      experimental_semivariogram(pts, bin_width, max_lag);
  const VariogramFit fit = fit_linear(ev);

  std::ofstream bins(args.out_path);
  if (!bins) throw IoError("cannot open '" + args.out_path + "' for writing");
  bins << "lag_m,gamma,pairs\n";
  for (const VariogramBin& b : ev.bins) {
    bins << format_number(b.lag_m) << ',' << format_number(b.gamma) << ','
         << b.pair_count << '\n';
  }

  out << "layer " << args.layer << ": nugget=" << format_number(fit.params.nugget)
      << " range_m=" << format_number(fit.params.range_m)
      << " sill=" << format_number(fit.params.sill);
  if (fit.degenerate) out << " (degenerate fit)";
  out << "\nbins written to " << args.out_path << "\n";
}

void run_krige(const KrigeArgs& args, std::ostream& out) {
  const RunConfig cfg = load_or_default(args.config_path);
  const FieldGrid grid = make_grid(cfg);
  const SimulationSettings settings = make_settings(cfg, grid);
  const std::vector<Sample> samples =
      load_samples_csv(args.samples_path, cfg.layers, cfg.profile_depth_step_cm);
  if (samples.empty()) throw InsufficientData("krige: no samples in file");

  const std::vector<VariogramParams> params =
      fit_layer_params(samples, grid, settings, out);
  const LayeredModel model =
      build_layered_model(samples, grid, cfg.layers, params);

  ensure_dir(args.out_dir);
  write_model_grids(model, args.out_dir);
  out << "kriged " << samples.size() << " samples over "
      << grid.reachable_count() << " cells; mean KV "
      << format_number(model.mean_kv) << "\n"
      << "grids written to " << args.out_dir << "\n";
}

void run_explore(const ExploreArgs& args, std::ostream& out) {
  const RunConfig cfg = load_or_default(args.config_path);
  if (cfg.strategies.empty()) {
    throw ValidationError("explore: config must list at least one strategy");
  }
  const FieldGrid grid = make_grid(cfg);
  const SimulationSettings settings = make_settings(cfg, grid);
  const SurrogateField field = make_surrogate(cfg, grid);

  const StrategyConfig& strategy = cfg.strategies.front();
  if (cfg.strategies.size() > 1) {
    out << "explore runs the first configured strategy ("
        << to_string(strategy.kind) << "); use compare for the full set\n";
  }
  const RunRecord record =
      run_exploration(strategy, field, settings, strategy.seed);

  ensure_dir(args.out_dir);
  export_run_csv(record, join(args.out_dir, "run.csv"));
  if (!record.initial_plan.route.empty()) {
    export_plan_csv(record.initial_plan, grid, join(args.out_dir, "plan.csv"));
  }
  write_model_grids(record.final_model, args.out_dir);
  if (args.dump_kv) {
    for (Eigen::Index t = 0; t < record.kv_trace.rows(); ++t) {
      const GridArray kv = grid_from_ordinals(grid, record.kv_trace.row(t));
      export_grid_csv(kv, join(args.out_dir,
                               "mean_kv_step" +
                                   std::to_string(record.steps[static_cast<std::size_t>(t)].step) +
                                   ".csv"));
    }
  }
  out << to_string(strategy.kind) << " run: " << record.steps.size()
      << " samples, path "
      << format_number(record.steps.empty()
                           ? 0.0
                           : record.steps.back().cumulative_path_m)
      << " m, final RMSE "
      << format_number(record.steps.empty() ? 0.0 : record.steps.back().rmse)
      << " kPa, final KV "
      << format_number(record.steps.empty() ? 0.0 : record.steps.back().kv)
      << "\noutputs written to " << args.out_dir << "\n";
}

void run_compare(const CompareArgs& args, std::ostream& out) {
  const RunConfig cfg = load_or_default(args.config_path);
  if (cfg.strategies.empty()) {
    throw ValidationError("compare: config must list at least one strategy");
  }
  const FieldGrid grid = make_grid(cfg);
  const SimulationSettings settings = make_settings(cfg, grid);
  const SurrogateField field = make_surrogate(cfg, grid);

  const std::vector<ComparisonRow> rows = compare_strategies(
      cfg.strategies, field, settings, cfg.budgets, cfg.seeds);
  ensure_dir(args.out_dir);
  export_comparison_csv(rows, join(args.out_dir, "comparison.csv"));
  out << "compared " << cfg.strategies.size() << " strategies x "
      << cfg.budgets.size() << " budgets x " << cfg.seeds.size()
      << " seeds\ncomparison.csv written to " << args.out_dir << "\n";
}

void run_gen_surrogate(const GenSurrogateArgs& args, std::ostream& out) {
  const RunConfig cfg = load_or_default(args.config_path);
  const FieldGrid grid = make_grid(cfg);
  const SurrogateField field = make_surrogate(cfg, grid);

  ensure_dir(args.out_dir);
  for (std::size_t k = 0; k < field.truth.size(); ++k) {
    export_grid_csv(field.truth[k],
                    join(args.out_dir, "truth_" + std::to_string(k) + ".csv"));
  }
  out << "surrogate with " << field.truth.size() << " layers over "
      << grid.reachable_count() << " cells written to " << args.out_dir << "\n";
  for (std::size_t k = 0; k < field.truth.size(); ++k) {
    double mean = 0.0;
    for (const CellIndex c : grid.reachable_cells()) {
      mean += field.truth[k](c.j, c.i);
    }
    mean /= grid.reachable_count();
    out << "layer " << k << " mean " << format_number(mean) << " kPa\n";
  }
}

void run_report_nrmse(const ReportNrmseArgs& args, std::ostream& out) {
  const RunConfig cfg = load_or_default(args.config_path);
  const FieldGrid grid = make_grid(cfg);

  const auto load_model = [&](const std::string& dir) {
    LayeredModel model;
    for (int k = 0; k < cfg.layers.count; ++k) {
      const std::string path = join(dir, "estimate_" + std::to_string(k) + ".csv");
      GridArray est = load_grid_csv(path);
      if (est.rows() != grid.ny() || est.cols() != grid.nx()) {
        throw ValidationError(path + ": grid shape mismatch");
      }
      model.layers.push_back({std::move(est), grid.make_grid(), {}, {}});
    }
    model.mean_kv_grid = grid.make_grid();
    return model;
  };
  const LayeredModel model_a = load_model(args.model_a_dir);
  const LayeredModel model_b = load_model(args.model_b_dir);

  const std::vector<NrmseRow> rows =
      normalized_rmse_report(model_a, model_b, grid);
  out << "layer,rmse_kpa,mean_a_kpa,rmse_over_mean\n";
  for (const NrmseRow& r : rows) {
    out << r.layer << ',' << format_number(r.rmse) << ','
        << format_number(r.mean_a) << ',';
    if (r.normalized) out << format_number(*r.normalized);
    out << '\n';
  }
  if (!args.out_path.empty()) {
    std::ofstream file(args.out_path);
    if (!file) throw IoError("cannot open '" + args.out_path + "' for writing");
    file << "layer,rmse_kpa,mean_a_kpa,rmse_over_mean\n";
    for (const NrmseRow& r : rows) {
      file << r.layer << ',' << format_number(r.rmse) << ','
           << format_number(r.mean_a) << ',';
      if (r.normalized) file << format_number(*r.normalized);
      file << '\n';
    }
  }
}

}  // namespace soilmap::cli
