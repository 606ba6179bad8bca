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

#ifndef SOILMAP_GRID_HPP
#define SOILMAP_GRID_HPP

#include <cmath>
#include <optional>
#include <vector>

#include "soilmap/error.hpp"
#include "soilmap/types.hpp"

namespace soilmap {

/// Field-local planar coordinates in meters (easting x, northing y).
struct Location {
  double x{0.0};
  double y{0.0};
};

inline double distance(const Location& a, const Location& b) {
  return std::hypot(a.x - b.x, a.y - b.y);
}

/// Grid cell address: i along x (column), j along y (row).
struct CellIndex {
  int i{0};
  int j{0};

  friend bool operator==(const CellIndex&, const CellIndex&) = default;
};

/// Scan order used for tie-breaking and trace layout: j outer, i inner.
inline bool scan_less(CellIndex a, CellIndex b) {
  return a.j != b.j ? a.j < b.j : a.i < b.i;
}

/// One observed value at one location (a single depth layer's view of a
/// sample).
struct PointValue {
  Location loc;
  double value{0.0};
};

/// Uniform depth discretisation: `count` layers of `thickness_cm` each.
struct LayerSpec {
  int count{1};
  double thickness_cm{5.0};

  void validate() const {
    if (count < 1) throw InvalidArgument("LayerSpec: layer count must be >= 1");
    if (!(thickness_cm > 0.0)) {
      throw InvalidArgument("LayerSpec: layer thickness must be positive");
    }
  }
};

/// Vertical series of compaction readings (kPa) at uniform depth
/// increments. Reading k sits at depth k * depth_step_cm.
class DepthProfile {
 public:
  DepthProfile(std::vector<double> readings, double depth_step_cm)
      : readings_(std::move(readings)), depth_step_cm_(depth_step_cm) {
    if (readings_.empty()) {
      throw InvalidArgument("DepthProfile: readings must be non-empty");
    }
    if (!(depth_step_cm_ > 0.0)) {
      throw InvalidArgument("DepthProfile: depth step must be positive");
    }
    for (const double r : readings_) {
      if (!std::isfinite(r) || r < 0.0) {
        throw InvalidArgument("DepthProfile: readings must be finite and >= 0");
      }
    }
  }

  const std::vector<double>& readings() const { return readings_; }
  double depth_step_cm() const { return depth_step_cm_; }
  double max_depth_cm() const {
    return static_cast<double>(readings_.size()) * depth_step_cm_;
  }

 private:
  std::vector<double> readings_;
  double depth_step_cm_;
};

/// Geo-tagged sample: per-layer aggregated compaction values, plus the raw
/// profile when one was recorded (simulated and pre-aggregated samples
/// carry none).
struct Sample {
  int id{0};
  Location location;
  std::optional<DepthProfile> profile;
  Vector layer_values;
};

/// Masked rectangular cell grid over the field. Immutable once built.
class FieldGrid {
 public:
  FieldGrid(Location origin, double cell_size_m, BoolGrid reachable);

  Location origin() const { return origin_; }
  double cell_size() const { return cell_size_; }
  int nx() const { return nx_; }
  int ny() const { return ny_; }

  /// Extent actually covered by cells (>= the requested field dimensions).
  double extent_x() const { return nx_ * cell_size_; }
  double extent_y() const { return ny_ * cell_size_; }

  bool in_extent(const Location& loc) const;

  /// Cell containing `loc`. Boundaries resolve by floor; the max edge of
  /// the field belongs to the last cell. Throws OutOfBounds outside the
  /// extent.
  CellIndex cell_of(const Location& loc) const;

  Location cell_center(CellIndex c) const {
    return {origin_.x + (c.i + 0.5) * cell_size_,
            origin_.y + (c.j + 0.5) * cell_size_};
  }

  bool valid_index(CellIndex c) const {
    return c.i >= 0 && c.i < nx_ && c.j >= 0 && c.j < ny_;
  }

  bool is_reachable(CellIndex c) const {
    return valid_index(c) && reachable_(c.j, c.i);
  }

  int reachable_count() const {
    return static_cast<int>(reachable_cells_.size());
  }

  /// All reachable cells in scan order (j outer, i inner).
  const std::vector<CellIndex>& reachable_cells() const {
    return reachable_cells_;
  }

  /// Position of a reachable cell within reachable_cells(), -1 otherwise.
  int reachable_ordinal(CellIndex c) const {
    if (!valid_index(c)) return -1;
    return ordinal_(c.j, c.i);
  }

  /// Reachable cell whose center is closest to `loc` (ties in scan order).
  CellIndex nearest_reachable(const Location& loc) const;

  /// (ny, nx) array filled with `fill` at reachable cells, NaN elsewhere.
  GridArray make_grid(double fill = 0.0) const;

 private:
  Location origin_;
  double cell_size_;
  int nx_;
  int ny_;
  BoolGrid reachable_;
  std::vector<CellIndex> reachable_cells_;
  Eigen::ArrayXXi ordinal_;
};

/// Discretise a width x height field into cells of `cell_size_m`, nx =
/// ceil(width/cell), ny = ceil(height/cell). Partial edge cells are kept.
/// The mask, when given, must be (ny, nx); it defaults to all-reachable.
FieldGrid build_grid(double width_m, double height_m, double cell_size_m,
                     const std::optional<BoolGrid>& mask = std::nullopt);

/// Collapse a raw profile into per-layer means. Layer k spans depths
/// [k*t, (k+1)*t); a reading exactly on an interior boundary counts toward
/// the deeper layer.
Vector aggregate_layers(const DepthProfile& profile, const LayerSpec& spec);

/// Merge entries at identical locations, averaging their values. Keeps
/// first-occurrence order; revisited grid cells would otherwise make the
/// kriging system singular.
std::vector<PointValue> dedup_by_location(const std::vector<PointValue>& pts);

}  // namespace soilmap

#endif  // SOILMAP_GRID_HPP
