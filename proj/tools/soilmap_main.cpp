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

#include <CLI11.hpp>
#include <iostream>

#include "soilmap/cli.hpp"
#include "soilmap/error.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Layered soil-condition mapping and exploration toolkit"};
  app.require_subcommand(1);

  soilmap::cli::FitVariogramArgs fit_args;
  CLI::App* fit = app.add_subcommand(
      "fit-variogram", "Fit the linear semivariogram model for one layer");
  fit->add_option("--samples", fit_args.samples_path, "sample CSV")->required();
  fit->add_option("--layer", fit_args.layer, "layer index (default 0)");
  fit->add_option("--bin-width", fit_args.bin_width_m, "lag bin width [m]");
  fit->add_option("--max-lag", fit_args.max_lag_m, "maximum lag [m]");
  fit->add_option("--config", fit_args.config_path, "run config JSON");
  fit->add_option("--out", fit_args.out_path,
                  "binned variogram CSV (default variogram.csv)");

  soilmap::cli::KrigeArgs krige_args;
  CLI::App* krige = app.add_subcommand(
      "krige", "Build per-layer kriged estimate and variance grids");
  krige->add_option("--samples", krige_args.samples_path, "sample CSV")
      ->required();
  krige->add_option("--grid", krige_args.config_path,
                    "run config JSON with the field grid");
  krige->add_option("--out", krige_args.out_dir, "output directory")
      ->required();

  soilmap::cli::ExploreArgs explore_args;
  CLI::App* explore = app.add_subcommand(
      "explore", "Simulate one exploration run on the surrogate field");
  explore->add_option("--config", explore_args.config_path, "run config JSON");
  explore->add_option("--out", explore_args.out_dir, "output directory")
      ->required();
  explore->add_flag("--dump-kv", explore_args.dump_kv,
                    "also write per-step mean-KV grids");

  soilmap::cli::CompareArgs compare_args;
  CLI::App* compare = app.add_subcommand(
      "compare", "Compare strategies across budgets and seeds");
  compare->add_option("--config", compare_args.config_path, "run config JSON");
  compare->add_option("--out", compare_args.out_dir,
                      "output directory (default .)");

  soilmap::cli::GenSurrogateArgs gen_args;
  CLI::App* gen = app.add_subcommand(
      "gen-surrogate", "Generate and write the synthetic ground-truth field");
  gen->add_option("--config", gen_args.config_path, "run config JSON");
  gen->add_option("--out", gen_args.out_dir, "output directory")->required();

  soilmap::cli::ReportNrmseArgs nrmse_args;
  CLI::App* nrmse = app.add_subcommand(
      "report-nrmse", "Per-layer normalized RMSE between two model grids");
  nrmse->add_option("--model-a", nrmse_args.model_a_dir,
                    "reference model directory")
      ->required();
  nrmse->add_option("--model-b", nrmse_args.model_b_dir,
                    "comparison model directory")
      ->required();
  nrmse->add_option("--config", nrmse_args.config_path, "run config JSON");
  nrmse->add_option("--out", nrmse_args.out_path, "also write the table here");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  try {
    if (fit->parsed()) soilmap::cli::run_fit_variogram(fit_args, std::cout);
    if (krige->parsed()) soilmap::cli::run_krige(krige_args, std::cout);
    if (explore->parsed()) soilmap::cli::run_explore(explore_args, std::cout);
    if (compare->parsed()) soilmap::cli::run_compare(compare_args, std::cout);
    if (gen->parsed()) soilmap::cli::run_gen_surrogate(gen_args, std::cout);
    if (nrmse->parsed()) soilmap::cli::run_report_nrmse(nrmse_args, std::cout);
  } catch (const soilmap::ValidationError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
