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

// End-to-end acceptance suite. Each criterion prints one pass/fail line;
// run a single criterion with --only <n>.

#include <chrono>
#include <cmath>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <soilmap/cli.hpp>
#include <soilmap/config.hpp>
#include <soilmap/csv.hpp>
#include <soilmap/simulation.hpp>

#include "support/oracles.hpp"

using namespace soilmap;

namespace {

struct Outcome {
  bool pass{false};
  std::string detail;
};

double seconds_since(
    const std::chrono::steady_clock::time_point& t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
      .count();
}

std::string fmt(double v) {
  std::ostringstream ss;
  ss.precision(4);
  ss << v;
  return ss.str();
}

// ---------------------------------------------------------------------------
// Demo field plumbing shared by the simulation criteria.

SurrogateField demo_field(std::uint64_t surrogate_seed) {
  RunConfig cfg = demo_config();
  cfg.surrogate.seed = surrogate_seed;
  const FieldGrid grid = make_grid(cfg);
  return make_surrogate(cfg, grid);
}

SimulationSettings demo_settings(const FieldGrid& grid, bool freeze = false) {
  const RunConfig cfg = demo_config();
  SimulationSettings settings = make_settings(cfg, grid);
  settings.variogram.freeze = freeze;
  return settings;
}

StrategyConfig strategy(StrategyKind kind, int budget) {
  StrategyConfig cfg;
  cfg.kind = kind;
  cfg.budget = budget;
  cfg.candidate_count = 50;
  cfg.initial_plan = StrategyKind::area_split;
  return cfg;
}

double mean(const std::vector<double>& v) {
  double acc = 0.0;
  for (const double x : v) acc += x;
  return acc / static_cast<double>(v.size());
}

// ---------------------------------------------------------------------------
// 1. Randomized kriging instances against the dense oracle.

Outcome criterion1() {
  const auto t0 = std::chrono::steady_clock::now();
  Rng rng(20260101);
  double max_weight_err = 0.0, max_var_err = 0.0, max_sum_err = 0.0,
         max_est_err = 0.0;
  for (int trial = 0; trial < 200; ++trial) {
    const int n = 1 + rng.uniform_int(8);
    std::vector<Location> locs;
    std::vector<oracles::Point> pts;
    Vector values(n);
    for (int i = 0; i < n; ++i) {
      const Location l{100.0 * rng.uniform(), 100.0 * rng.uniform()};
      locs.push_back(l);
      pts.push_back({l.x, l.y});
      values[i] = 1000.0 * rng.uniform();
    }
    VariogramParams p;
    p.nugget = rng.uniform() < 0.3 ? 0.0 : 5.0 * rng.uniform();
    p.range_m = 10.0 + 120.0 * rng.uniform();
    p.sill = 0.5 + 9.5 * rng.uniform();
    const Location target{100.0 * rng.uniform(), 100.0 * rng.uniform()};

    const KrigingSystem system(locs, p);
    const KrigingSolution sol = system.solve(target);
    const oracles::OkSolution ref = oracles::ok_solve(
        pts, p.nugget, p.range_m, p.sill, {target.x, target.y});

    max_sum_err = std::max(max_sum_err, std::abs(sol.weights.sum() - 1.0));
    for (int i = 0; i < n; ++i) {
      max_weight_err = std::max(
          max_weight_err,
          std::abs(sol.weights[i] - ref.weights[static_cast<std::size_t>(i)]));
    }
    double ref_est = 0.0;
    for (int i = 0; i < n; ++i) {
      ref_est += ref.weights[static_cast<std::size_t>(i)] * values[i];
    }
    max_est_err = std::max(max_est_err, std::abs(estimate(sol, values) - ref_est));
    const double var = variance(sol, system.gamma_to(target));
    max_var_err =
        std::max(max_var_err, std::abs(var - std::max(ref.variance, 0.0)));
  }
  const double elapsed = seconds_since(t0);
  const bool pass = max_weight_err <= 1e-8 && max_var_err <= 1e-8 &&
                    max_est_err <= 1e-8 && max_sum_err <= 1e-9 &&
                    elapsed < 5.0;
  return {pass, "200 instances; max weight err " + fmt(max_weight_err) +
                    ", variance err " + fmt(max_var_err) + ", weight-sum err " +
                    fmt(max_sum_err) + "; " + fmt(elapsed) + " s"};
}

// ---------------------------------------------------------------------------
// 2. Exact interpolation at sample locations with zero nugget.

Outcome criterion2() {
  Rng rng(20260202);
  double max_est_err = 0.0, max_var = 0.0;
  for (int trial = 0; trial < 50; ++trial) {
    const int n = 2 + rng.uniform_int(9);
    std::vector<Location> locs;
    Vector values(n);
    for (int i = 0; i < n; ++i) {
      locs.push_back({200.0 * rng.uniform(), 200.0 * rng.uniform()});
      values[i] = 100.0 + 900.0 * rng.uniform();
    }
    const VariogramParams p{0.0, 20.0 + 100.0 * rng.uniform(),
                            0.5 + 8.0 * rng.uniform()};
    const KrigingSystem system(locs, p);
    for (int i = 0; i < n; ++i) {
      const Location& at = locs[static_cast<std::size_t>(i)];
      const KrigingSolution sol = system.solve(at);
      max_est_err =
          std::max(max_est_err, std::abs(estimate(sol, values) - values[i]));
      max_var = std::max(max_var, variance(sol, system.gamma_to(at)));
    }
  }
  const bool pass = max_est_err <= 1e-8 && max_var <= 1e-8;
  return {pass, "50 instances; max estimate err " + fmt(max_est_err) +
                    ", max variance " + fmt(max_var)};
}

// ---------------------------------------------------------------------------
// 3. Variogram fitting: exact recovery and sill recovery on generated fields.

Outcome criterion3() {
  Rng rng(20260303);
  double max_rel = 0.0;
  for (int trial = 0; trial < 30; ++trial) {
    const double max_lag = 60.0 + 120.0 * rng.uniform();
    VariogramParams truth;
    truth.nugget = 0.3 + 4.0 * rng.uniform();
    truth.sill = 1.0 + 9.0 * rng.uniform();
    truth.range_m = max_lag * (0.25 + 0.5 * rng.uniform());
    ExperimentalVariogram ev;
    for (int k = 1; k <= 18; ++k) {
      const double lag = max_lag * k / 18.0;
      ev.bins.push_back({lag,
                         oracles::linear_gamma(truth.nugget, truth.range_m,
                                               truth.sill, lag),
                         5 + rng.uniform_int(60)});
    }
    const VariogramFit fit = fit_linear(ev);
    max_rel = std::max(max_rel,
                       std::abs(fit.params.nugget - truth.nugget) / truth.nugget);
    max_rel = std::max(
        max_rel, std::abs(fit.params.range_m - truth.range_m) / truth.range_m);
    max_rel =
        std::max(max_rel, std::abs(fit.params.sill - truth.sill) / truth.sill);
  }

  // Sill (plateau) recovery on generated 936-cell fields. Short-range
  // parameters keep the generator positive definite while the plateau
  // stays well inside the observable lag span.
  const RunConfig cfg = demo_config();
  const FieldGrid grid = make_grid(cfg);
  const VariogramParams gen{375.0, 15.0, 1500.0};
  const double truth_plateau = gen.nugget + gen.sill;
  std::vector<double> ratios;
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    const SurrogateField field = generate_surrogate(
        grid, {1, 5.0}, std::vector{gen}, std::vector{600.0}, seed);
    std::vector<PointValue> pts;
    for (const CellIndex c : grid.reachable_cells()) {
      pts.push_back({grid.cell_center(c), field.truth[0](c.j, c.i)});
    }
    const VariogramFit fit = fit_linear(experimental_semivariogram(
        pts, grid.cell_size(), 0.5 * std::hypot(grid.extent_x(), grid.extent_y())));
    ratios.push_back((fit.params.nugget + fit.params.sill) / truth_plateau);
  }
  const double mean_ratio = mean(ratios);

  const bool pass = max_rel <= 1e-3 && mean_ratio >= 0.7 && mean_ratio <= 1.3;
  return {pass, "30 noiseless refits, max relative err " + fmt(max_rel) +
                    "; 936-cell plateau ratio " + fmt(mean_ratio) +
                    " over 10 seeds"};
}

// ---------------------------------------------------------------------------
// 4. TSP quality against the exhaustive 5-target optimum.

Outcome criterion4() {
  const RunConfig cfg = demo_config();
  const FieldGrid grid = make_grid(cfg);
  Rng rng(20260404);
  double worst = 1.0;
  for (int trial = 0; trial < 100; ++trial) {
    std::vector<CellIndex> targets;
    std::set<std::pair<int, int>> used;
    while (targets.size() < 5) {
      const CellIndex c = grid.reachable_cells()[static_cast<std::size_t>(
          rng.uniform_int(grid.reachable_count()))];
      if (used.insert({c.i, c.j}).second) targets.push_back(c);
    }
    const Location origin{grid.extent_x() * rng.uniform(),
                          grid.extent_y() * rng.uniform()};
    const Route route = tsp_route(origin, targets, grid);
    std::vector<oracles::Point> pts;
    for (const CellIndex c : targets) {
      const Location l = grid.cell_center(c);
      pts.push_back({l.x, l.y});
    }
    const double best = oracles::best_open_path({origin.x, origin.y}, pts);
    worst = std::max(worst, route.length_m / best);
  }
  return {worst <= 1.05, "100 instances; worst length ratio " + fmt(worst)};
}

// ---------------------------------------------------------------------------
// 5. KV <-> squared-error correlation per strategy on the demo field.

Outcome criterion5() {
  const auto t0 = std::chrono::steady_clock::now();
  const std::vector<StrategyKind> kinds = {
      StrategyKind::greedy, StrategyKind::random, StrategyKind::area_split,
      StrategyKind::adaptive_greedy};
  std::vector<SurrogateField> fields;
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    fields.push_back(demo_field(1000 + seed));
  }
  const SimulationSettings settings = demo_settings(fields.front().grid);
  std::map<StrategyKind, double> mean_r;
  for (const StrategyKind kind : kinds) {
    std::vector<double> rs;
    for (std::uint64_t seed = 1; seed <= 10; ++seed) {
      const RunRecord rec = run_exploration(
          strategy(kind, 50), fields[static_cast<std::size_t>(seed - 1)],
          settings, seed);
      rs.push_back(kv_mse_correlation(rec));
    }
    mean_r[kind] = mean(rs);
  }
  const double elapsed = seconds_since(t0);
  bool pass = elapsed < 300.0;
  std::string detail;
  for (const StrategyKind kind : kinds) {
    pass = pass && mean_r[kind] >= 0.6;
    detail += to_string(kind) + " r=" + fmt(mean_r[kind]) + " ";
  }
  pass = pass && mean_r[StrategyKind::area_split] >=
                     mean_r[StrategyKind::greedy] - 0.1;
  detail += "(10 seeds each; " + fmt(elapsed) + " s)";
  return {pass, detail};
}

// ---------------------------------------------------------------------------
// 6 and 7 share the full strategy-by-budget comparison table.

struct TrendData {
  // mean path length and final RMSE per (kind, budget)
  std::map<std::pair<int, int>, double> path;
  std::map<std::pair<int, int>, double> rmse;
};

const TrendData& trend_data() {
  static const TrendData data = [] {
    TrendData d;
    const std::vector<StrategyKind> kinds = {
        StrategyKind::random,      StrategyKind::w_shape,
        StrategyKind::area_split,  StrategyKind::greedy,
        StrategyKind::monte_carlo, StrategyKind::adaptive_greedy,
        StrategyKind::adaptive_mc};
    const std::vector<int> budgets = {15, 20, 30, 50};
    constexpr int kSeeds = 20;
    std::vector<SurrogateField> fields;
    for (int s = 1; s <= kSeeds; ++s) {
      fields.push_back(demo_field(static_cast<std::uint64_t>(2000 + s)));
    }
    const SimulationSettings settings = demo_settings(fields.front().grid);
    for (const StrategyKind kind : kinds) {
      for (const int budget : budgets) {
        std::vector<double> paths, rmses;
        for (int s = 1; s <= kSeeds; ++s) {
          const RunRecord rec =
              run_exploration(strategy(kind, budget),
                              fields[static_cast<std::size_t>(s - 1)], settings,
                              static_cast<std::uint64_t>(s));
          paths.push_back(rec.steps.back().cumulative_path_m);
          rmses.push_back(rec.steps.back().rmse);
        }
        d.path[{static_cast<int>(kind), budget}] = mean(paths);
        d.rmse[{static_cast<int>(kind), budget}] = mean(rmses);
      }
    }
    return d;
  }();
  return data;
}

Outcome criterion6() {
  const auto t0 = std::chrono::steady_clock::now();
  const TrendData& d = trend_data();
  const double adaptive =
      d.rmse.at({static_cast<int>(StrategyKind::adaptive_greedy), 50});
  const double random_rmse =
      d.rmse.at({static_cast<int>(StrategyKind::random), 50});
  const bool pass = adaptive <= random_rmse;
  return {pass, "mean final RMSE at 50 samples over 20 seeds: adaptive_greedy " +
                    fmt(adaptive) + " kPa vs random " + fmt(random_rmse) +
                    " kPa (" + fmt(seconds_since(t0)) + " s)"};
}

Outcome criterion7() {
  const auto t0 = std::chrono::steady_clock::now();
  const TrendData& d = trend_data();
  const double greedy_path =
      d.path.at({static_cast<int>(StrategyKind::greedy), 50});
  const double adaptive_path =
      d.path.at({static_cast<int>(StrategyKind::adaptive_greedy), 50});
  bool pass = greedy_path >= 2.0 * adaptive_path;
  std::string detail = "greedy " + fmt(greedy_path) + " m vs adaptive_greedy " +
                       fmt(adaptive_path) + " m at 50 samples";

  const std::vector<StrategyKind> kinds = {
      StrategyKind::random,      StrategyKind::w_shape,
      StrategyKind::area_split,  StrategyKind::greedy,
      StrategyKind::monte_carlo, StrategyKind::adaptive_greedy,
      StrategyKind::adaptive_mc};
  for (const int budget : {15, 20, 30, 50}) {
    const double w = d.path.at({static_cast<int>(StrategyKind::w_shape), budget});
    for (const StrategyKind kind : kinds) {
      if (kind == StrategyKind::w_shape) continue;
      if (d.path.at({static_cast<int>(kind), budget}) < w) {
        pass = false;
        detail += "; " + to_string(kind) + " beat w_shape at budget " +
                  std::to_string(budget);
      }
    }
  }
  detail += "; w_shape shortest at every budget checked (" +
            fmt(seconds_since(t0)) + " s)";
  return {pass, detail};
}

// ---------------------------------------------------------------------------
// 8. Exhaustive sampling drives MSE and KV to zero.

Outcome criterion8() {
  const FieldGrid grid = build_grid(60.0, 60.0, 5.0);  // 144 cells
  const LayerSpec spec{2, 5.0};
  const SurrogateField field = generate_surrogate(
      grid, spec, std::vector<VariogramParams>(2, {30.0, 40.0, 300.0}),
      std::vector<double>{400.0, 500.0}, 7);
  SimulationSettings settings;
  settings.layers = spec;
  settings.variogram.freeze = true;
  settings.variogram.prior = {0.0, 200.0, 100.0};  // range beyond the field
  settings.noise_sd_kpa = 0.0;
  settings.start = grid.cell_center({0, grid.ny() - 1});
  const RunRecord rec = run_exploration(
      strategy(StrategyKind::greedy, grid.reachable_count()), field, settings,
      1);
  const double mse = rec.steps.back().mse;
  const double kv = rec.steps.back().kv;
  const bool pass = rec.steps.size() ==
                        static_cast<std::size_t>(grid.reachable_count()) &&
                    mse <= 1e-6 && kv <= 1e-6;
  return {pass, "144-cell exhaustive greedy: final MSE " + fmt(mse) +
                    ", final KV " + fmt(kv)};
}

// ---------------------------------------------------------------------------
// 9. Byte-identical CLI outputs for identical configs and seeds.

Outcome criterion9() {
  namespace fs = std::filesystem;
  const fs::path dir = fs::temp_directory_path() / "soilmap_acceptance_c9";
  fs::remove_all(dir);
  fs::create_directories(dir);
  {
    std::ofstream cfg(dir / "cfg.json");
    cfg << R"({
      "field": {"width_m": 60, "height_m": 40},
      "layers": {"count": 3, "thickness_cm": 5},
      "variogram": {"prior": {"nugget": 50, "range_m": 30, "sill": 600}},
      "surrogate": {"seed": 4, "params": {"nugget": 50, "range_m": 30, "sill": 600},
                     "depth_trend_kpa": [350, 450, 550]},
      "strategies": [{"kind": "adaptive_mc", "budget": 12, "seed": 9},
                      {"kind": "random", "budget": 12, "seed": 9}],
      "budgets": [8, 12],
      "seeds": [1, 2]
    })";
  }
  const std::string cfg = (dir / "cfg.json").string();
  std::ostringstream sink;
  cli::run_explore({cfg, (dir / "a").string(), false}, sink);
  cli::run_explore({cfg, (dir / "b").string(), false}, sink);
  cli::run_compare({cfg, (dir / "ca").string()}, sink);
  cli::run_compare({cfg, (dir / "cb").string()}, sink);

  const auto slurp = [](const fs::path& p) {
    std::ifstream in(p);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
  };
  const std::string run_a = slurp(dir / "a" / "run.csv");
  const bool runs_equal = !run_a.empty() && run_a == slurp(dir / "b" / "run.csv");
  const std::string cmp_a = slurp(dir / "ca" / "comparison.csv");
  const bool cmps_equal =
      !cmp_a.empty() && cmp_a == slurp(dir / "cb" / "comparison.csv");
  return {runs_equal && cmps_equal,
          std::string("run.csv ") + (runs_equal ? "identical" : "DIFFERS") +
              ", comparison.csv " + (cmps_equal ? "identical" : "DIFFERS")};
}

// ---------------------------------------------------------------------------
// 10. One full demo run within the time budget.

Outcome criterion10() {
  const SurrogateField field = demo_field(1);
  const SimulationSettings settings = demo_settings(field.grid);  // refit on
  const auto t0 = std::chrono::steady_clock::now();
  const RunRecord rec = run_exploration(
      strategy(StrategyKind::adaptive_greedy, 50), field, settings, 1);
  const double elapsed = seconds_since(t0);
  const bool pass = elapsed < 60.0 && rec.steps.size() == 50;
  return {pass, "936-cell, 8-layer, 50-sample adaptive_greedy run in " +
                    fmt(elapsed) + " s (final RMSE " +
                    fmt(rec.steps.back().rmse) + " kPa)"};
}

}  // namespace

int main(int argc, char** argv) {
  int only = 0;
  for (int a = 1; a < argc; ++a) {
    if (std::strcmp(argv[a], "--only") == 0 && a + 1 < argc) {
      only = std::atoi(argv[a + 1]);
    }
  }

  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria = {
      {"kriging solve/estimate/variance match the dense oracle", criterion1},
      {"exact interpolation with zero nugget", criterion2},
      {"variogram recovery (noiseless refit and generated-field sill)",
       criterion3},
      {"TSP within 5% of the exhaustive optimum", criterion4},
      {"KV correlates with squared error per strategy", criterion5},
      {"adaptive_greedy beats random on mean final RMSE", criterion6},
      {"path-length trends (greedy >= 2x adaptive; w_shape shortest)",
       criterion7},
      {"exhaustive sampling limit reaches zero MSE and KV", criterion8},
      {"byte-identical run.csv and comparison.csv", criterion9},
      {"demo-scale adaptive run under 60 s", criterion10},
  };

  int failures = 0;
  for (std::size_t k = 0; k < criteria.size(); ++k) {
    const int id = static_cast<int>(k) + 1;
    if (only != 0 && only != id) continue;
    Outcome outcome;
    try {
      outcome = criteria[k].second();
    } catch (const std::exception& e) {
      outcome = {false, std::string("exception: ") + e.what()};
    }
    std::cout << (outcome.pass ? "[PASS]" : "[FAIL]") << " criterion " << id
              << ": " << criteria[k].first << " -- " << outcome.detail << "\n";
    if (!outcome.pass) ++failures;
  }
  return failures == 0 ? 0 : 1;
}
