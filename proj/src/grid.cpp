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

#include "soilmap/grid.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

namespace soilmap {

FieldGrid::FieldGrid(Location origin, double cell_size_m, BoolGrid reachable)
    : origin_(origin),
      cell_size_(cell_size_m),
      nx_(static_cast<int>(reachable.cols())),
      ny_(static_cast<int>(reachable.rows())),
      reachable_(std::move(reachable)) {
  if (!(cell_size_ > 0.0)) {
    throw InvalidArgument("FieldGrid: cell size must be positive");
  }
  if (nx_ < 1 || ny_ < 1) {
    throw InvalidArgument("FieldGrid: grid must have at least one cell");
  }
  if (!std::isfinite(origin_.x) || !std::isfinite(origin_.y)) {
    throw InvalidArgument("FieldGrid: origin must be finite");
  }
  ordinal_ = Eigen::ArrayXXi::Constant(ny_, nx_, -1);
  for (int j = 0; j < ny_; ++j) {
    for (int i = 0; i < nx_; ++i) {
      if (reachable_(j, i)) {
        ordinal_(j, i) = static_cast<int>(reachable_cells_.size());
        reachable_cells_.push_back({i, j});
      }
    }
  }
  if (reachable_cells_.empty()) {
    throw InvalidArgument("FieldGrid: mask leaves no reachable cell");
  }
}

bool FieldGrid::in_extent(const Location& loc) const {
  const double rx = loc.x - origin_.x;
  const double ry = loc.y - origin_.y;
  return std::isfinite(rx) && std::isfinite(ry) && rx >= 0.0 && ry >= 0.0 &&
         rx <= extent_x() && ry <= extent_y();
}

CellIndex FieldGrid::cell_of(const Location& loc) const {
  if (!in_extent(loc)) {
    throw OutOfBounds("cell_of: location (" + std::to_string(loc.x) + ", " +
                      std::to_string(loc.y) + ") outside grid extent");
  }
  int i = static_cast<int>(std::floor((loc.x - origin_.x) / cell_size_));
  int j = static_cast<int>(std::floor((loc.y - origin_.y) / cell_size_));
  i = std::min(i, nx_ - 1);  // max edge belongs to the last cell
  j = std::min(j, ny_ - 1);
  return {i, j};
}

CellIndex FieldGrid::nearest_reachable(const Location& loc) const {
  CellIndex best = reachable_cells_.front();
  double best_d = std::numeric_limits<double>::infinity();
  for (const CellIndex c : reachable_cells_) {
    const double d = distance(loc, cell_center(c));
    if (d < best_d) {
      best_d = d;
      best = c;
    }
  }
  return best;
}

GridArray FieldGrid::make_grid(double fill) const {
  GridArray g =
      GridArray::Constant(ny_, nx_, std::numeric_limits<double>::quiet_NaN());
  for (const CellIndex c : reachable_cells_) g(c.j, c.i) = fill;
  return g;
}

FieldGrid build_grid(double width_m, double height_m, double cell_size_m,
                     const std::optional<BoolGrid>& mask) {
  if (!(width_m > 0.0) || !(height_m > 0.0) || !(cell_size_m > 0.0)) {
    throw InvalidArgument("build_grid: dimensions and cell size must be positive");
  }
  const int nx = static_cast<int>(std::ceil(width_m / cell_size_m));
  const int ny = static_cast<int>(std::ceil(height_m / cell_size_m));
  BoolGrid reachable;
  if (mask) {
    if (mask->rows() != ny || mask->cols() != nx) {
      throw InvalidArgument("build_grid: mask shape " +
                            std::to_string(mask->rows()) + "x" +
                            std::to_string(mask->cols()) + " does not match " +
                            std::to_string(ny) + "x" + std::to_string(nx));
    }
    reachable = *mask;
  } else {
    reachable = BoolGrid::Constant(ny, nx, true);
  }
  return FieldGrid({0.0, 0.0}, cell_size_m, std::move(reachable));
}

Vector aggregate_layers(const DepthProfile& profile, const LayerSpec& spec) {
  spec.validate();
  const double t = spec.thickness_cm;
  if (spec.count * t > profile.max_depth_cm() + 1e-9) {
    throw InvalidArgument("aggregate_layers: layer span exceeds profile depth");
  }
  Vector out = Vector::Zero(spec.count);
  Eigen::VectorXi counts = Eigen::VectorXi::Zero(spec.count);
  const double step = profile.depth_step_cm();
  for (std::size_t r = 0; r < profile.readings().size(); ++r) {
    const double depth = static_cast<double>(r) * step;
    const double q = depth / t;
    int k = static_cast<int>(std::floor(q));
    // A reading on an interior boundary counts toward the deeper layer;
    // snap within 1e-9 of the boundary so inexact depth steps honor that.
    if (q - k > 1.0 - 1e-9) k += 1;
    if (k >= spec.count) break;  // readings are ordered by depth
    out[k] += profile.readings()[r];
    counts[k] += 1;
  }
  for (int k = 0; k < spec.count; ++k) {
    if (counts[k] == 0) {
      throw InvalidArgument("aggregate_layers: layer " + std::to_string(k) +
                            " has no readings");
    }
    out[k] /= counts[k];
  }
  return out;
}

std::vector<PointValue> dedup_by_location(const std::vector<PointValue>& pts) {
  std::vector<PointValue> out;
  std::vector<int> hits;
  out.reserve(pts.size());
  for (const PointValue& p : pts) {
    bool merged = false;
    for (std::size_t k = 0; k < out.size(); ++k) {
      if (out[k].loc.x == p.loc.x && out[k].loc.y == p.loc.y) {
        out[k].value += (p.value - out[k].value) / (hits[k] + 1);
        hits[k] += 1;
        merged = true;
        break;
      }
    }
    if (!merged) {
      out.push_back(p);
      hits.push_back(1);
    }
  }
  return out;
}

}  // namespace soilmap
