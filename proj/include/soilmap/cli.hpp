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

#ifndef SOILMAP_CLI_HPP
#define SOILMAP_CLI_HPP

#include <iosfwd>
#include <string>

namespace soilmap::cli {

struct FitVariogramArgs {
  std::string samples_path;
  std::string config_path;  // optional; supplies layers/defaults
  int layer{0};
  double bin_width_m{0.0};  // <= 0: default (cell size / needs config)
  double max_lag_m{0.0};    // <= 0: default (half grid diagonal)
  std::string out_path{"variogram.csv"};
};

struct KrigeArgs {
  std::string samples_path;
  std::string config_path;
  std::string out_dir;
};

struct ExploreArgs {
  std::string config_path;
  std::string out_dir;
  bool dump_kv{false};  // also write per-step mean-KV grids
};

struct CompareArgs {
  std::string config_path;
  std::string out_dir{"."};
};

struct GenSurrogateArgs {
  std::string config_path;
  std::string out_dir;
};

struct ReportNrmseArgs {
  std::string model_a_dir;
  std::string model_b_dir;
  std::string config_path;
  std::string out_path;  // optional CSV copy of the table
};

void run_fit_variogram(const FitVariogramArgs& args, std::ostream& out);
void run_krige(const KrigeArgs& args, std::ostream& out);
void run_explore(const ExploreArgs& args, std::ostream& out);
void run_compare(const CompareArgs& args, std::ostream& out);
void run_gen_surrogate(const GenSurrogateArgs& args, std::ostream& out);
void run_report_nrmse(const ReportNrmseArgs& args, std::ostream& out);

}  // namespace soilmap::cli

#endif  // SOILMAP_CLI_HPP
