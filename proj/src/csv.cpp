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

#include "soilmap/csv.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <set>
#include <sstream>

namespace soilmap {

namespace {

std::vector<std::string> split_line(std::string line) {
  if (!line.empty() && line.back() == '\r') line.pop_back();
  std::vector<std::string> fields;
  std::string field;
  std::stringstream ss(line);
  while (std::getline(ss, field, ',')) fields.push_back(field);
  if (!line.empty() && line.back() == ',') fields.emplace_back();
  return fields;
}

double parse_double(const std::string& s, const std::string& context) {
  try {
    std::size_t used = 0;
    const double v = std::stod(s, &used);
    if (used != s.size()) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    throw ParseError(context + ": cannot parse number '" + s + "'");
  }
}

long parse_long(const std::string& s, const std::string& context) {
  try {
    std::size_t used = 0;
    const long v = std::stol(s, &used);
    if (used != s.size()) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    throw ParseError(context + ": cannot parse integer '" + s + "'");
  }
}

std::ofstream open_out(const std::string& path) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot open '" + path + "' for writing");
  return out;
}

std::ifstream open_in(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw NotFound("cannot open '" + path + "'");
  return in;
}

}  // namespace

std::string format_number(double v) {
  if (v == 0.0) v = 0.0;  // normalize -0
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.9g", v);
  return buf;
}

void export_grid_csv(const GridArray& values, const std::string& path) {
  std::ofstream out = open_out(path);
  for (Eigen::Index j = 0; j < values.rows(); ++j) {
    for (Eigen::Index i = 0; i < values.cols(); ++i) {
      if (i > 0) out << ',';
      const double v = values(j, i);
      if (std::isfinite(v)) out << format_number(v);
    }
    out << '\n';
  }
  if (!out) throw IoError("failed writing '" + path + "'");
}

GridArray load_grid_csv(const std::string& path) {
  std::ifstream in = open_in(path);
  std::vector<std::vector<double>> rows;
  std::string line;
  std::size_t width = 0;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty() && in.eof()) break;
    const std::vector<std::string> fields = split_line(line);
    std::vector<double> row;
    row.reserve(fields.size());
    for (const std::string& f : fields) {
      row.push_back(f.empty() ? std::numeric_limits<double>::quiet_NaN()
                              : parse_double(f, path + ":" +
                                                    std::to_string(lineno)));
    }
    if (width == 0) width = row.size();
    if (row.size() != width) {
      throw ParseError(path + ":" + std::to_string(lineno) +
                       ": inconsistent column count");
    }
    rows.push_back(std::move(row));
  }
  if (rows.empty()) throw ParseError(path + ": empty grid file");
  GridArray grid(static_cast<Eigen::Index>(rows.size()),
                 static_cast<Eigen::Index>(width));
  for (std::size_t j = 0; j < rows.size(); ++j) {
    for (std::size_t i = 0; i < width; ++i) {
      grid(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(i)) =
          rows[j][i];
    }
  }
  return grid;
}

std::vector<Sample> load_samples_csv(const std::string& path,
                                     const LayerSpec& spec,
                                     double depth_step_cm) {
  spec.validate();
  std::ifstream in = open_in(path);
  std::string line;
  if (!std::getline(in, line)) throw ParseError(path + ": missing header row");
  const std::vector<std::string> header = split_line(line);
  if (header.size() < 4 || header[0] != "id" || header[1] != "x_m" ||
      header[2] != "y_m") {
    throw ParseError(path + ": header must start with id,x_m,y_m");
  }
  bool raw_profile;
  if (header[3].starts_with("v")) {
    raw_profile = false;
    if (static_cast<int>(header.size()) - 3 != spec.count) {
      throw ParseError(path + ": expected " + std::to_string(spec.count) +
                       " layer-value columns, found " +
                       std::to_string(header.size() - 3));
    }
  } else if (header[3].starts_with("d")) {
    raw_profile = true;
  } else {
    throw ParseError(path + ": value columns must be v0.. or d0..");
  }

  std::vector<Sample> samples;
  std::set<int> seen_ids;
  int lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    const std::string where = path + ":" + std::to_string(lineno);
    const std::vector<std::string> fields = split_line(line);
    if (fields.size() != header.size()) {
      throw ParseError(where + ": expected " + std::to_string(header.size()) +
                       " columns, found " + std::to_string(fields.size()));
    }
    Sample s;
    s.id = static_cast<int>(parse_long(fields[0], where));
    if (!seen_ids.insert(s.id).second) {
      throw ValidationError(where + ": duplicate sample id " +
                            std::to_string(s.id));
    }
    s.location = {parse_double(fields[1], where),
                  parse_double(fields[2], where)};
    std::vector<double> values;
    values.reserve(fields.size() - 3);
    for (std::size_t c = 3; c < fields.size(); ++c) {
      values.push_back(parse_double(fields[c], where));
    }
    if (raw_profile) {
      s.profile = DepthProfile(values, depth_step_cm);
      s.layer_values = aggregate_layers(*s.profile, spec);
    } else {
      s.layer_values =
          Eigen::Map<const Vector>(values.data(),
                                   static_cast<Eigen::Index>(values.size()));
      for (const double v : values) {
        if (!std::isfinite(v)) {
          throw ValidationError(where + ": layer values must be finite");
        }
      }
    }
    samples.push_back(std::move(s));
  }
  return samples;
}

void export_plan_csv(const Plan& plan, const FieldGrid& grid,
                     const std::string& path) {
  std::ofstream out = open_out(path);
  out << "order,cell_i,cell_j,x_m,y_m\n";
  for (std::size_t k = 0; k < plan.route.size(); ++k) {
    const Location c = grid.cell_center(plan.route[k]);
    out << k << ',' << plan.route[k].i << ',' << plan.route[k].j << ','
        << format_number(c.x) << ',' << format_number(c.y) << '\n';
  }
  if (!out) throw IoError("failed writing '" + path + "'");
}

void export_run_csv(const RunRecord& record, const std::string& path) {
  std::ofstream out = open_out(path);
  out << "step,sample_id,x_m,y_m,path_m,mse,rmse,kv\n";
  for (const StepRecord& s : record.steps) {
    out << s.step << ',' << s.sample_id << ',' << format_number(s.location.x)
        << ',' << format_number(s.location.y) << ','
        << format_number(s.cumulative_path_m) << ',' << format_number(s.mse)
        << ',' << format_number(s.rmse) << ',' << format_number(s.kv) << '\n';
  }
  if (!out) throw IoError("failed writing '" + path + "'");
}

void export_comparison_csv(const std::vector<ComparisonRow>& rows,
                           const std::string& path) {
  std::ofstream out = open_out(path);
  out << "strategy,budget,mean_rmse_kpa,mean_path_m,mean_final_kv,runs\n";
  for (const ComparisonRow& r : rows) {
    out << to_string(r.kind) << ',' << r.budget << ','
        << format_number(r.mean_rmse_kpa) << ',' << format_number(r.mean_path_m)
        << ',' << format_number(r.mean_final_kv) << ',' << r.runs << '\n';
  }
  if (!out) throw IoError("failed writing '" + path + "'");
}

GridArray grid_from_ordinals(const FieldGrid& grid, const Vector& values) {
  if (values.size() != grid.reachable_count()) {
    throw InvalidArgument("grid_from_ordinals: length mismatch");
  }
  GridArray out = grid.make_grid();
  const std::vector<CellIndex>& cells = grid.reachable_cells();
  for (std::size_t c = 0; c < cells.size(); ++c) {
    out(cells[c].j, cells[c].i) = values[static_cast<Eigen::Index>(c)];
  }
  return out;
}

SurrogateField load_surrogate(const FieldGrid& grid, const LayerSpec& spec,
                              const std::string& dir) {
  spec.validate();
  SurrogateField field{grid, {}, SurrogateMode::loaded, 0, dir};
  for (int k = 0; k < spec.count; ++k) {
    const std::string path = dir + "/truth_" + std::to_string(k) + ".csv";
    GridArray layer = load_grid_csv(path);
    if (layer.rows() != grid.ny() || layer.cols() != grid.nx()) {
      throw ValidationError(path + ": grid shape mismatch");
    }
    for (const CellIndex c : grid.reachable_cells()) {
      if (!std::isfinite(layer(c.j, c.i))) {
        throw ValidationError(path + ": missing value at reachable cell (" +
                              std::to_string(c.i) + ", " + std::to_string(c.j) +
                              ")");
      }
    }
    field.truth.push_back(std::move(layer));
  }
  return field;
}

std::vector<NrmseRow> normalized_rmse_report(const LayeredModel& model_a,
                                             const LayeredModel& model_b,
                                             const FieldGrid& grid) {
  if (model_a.layers.size() != model_b.layers.size()) {
    throw InvalidArgument("normalized_rmse_report: layer count mismatch");
  }
  const std::vector<CellIndex>& cells = grid.reachable_cells();
  std::vector<NrmseRow> rows;
  for (std::size_t k = 0; k < model_a.layers.size(); ++k) {
    double sq = 0.0;
    double mean_a = 0.0;
    for (const CellIndex c : cells) {
      const double a = model_a.layers[k].estimates(c.j, c.i);
      const double b = model_b.layers[k].estimates(c.j, c.i);
      sq += (a - b) * (a - b);
      mean_a += a;
    }
    sq /= static_cast<double>(cells.size());
    mean_a /= static_cast<double>(cells.size());
    NrmseRow row{static_cast<int>(k), std::sqrt(sq), mean_a, std::nullopt};
    if (mean_a != 0.0) row.normalized = row.rmse / mean_a;
    rows.push_back(row);
  }
  return rows;
}

}  // namespace soilmap
