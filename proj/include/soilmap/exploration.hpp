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

#ifndef SOILMAP_EXPLORATION_HPP
#define SOILMAP_EXPLORATION_HPP

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "soilmap/grid.hpp"
#include "soilmap/rng.hpp"

namespace soilmap {

enum class StrategyKind {
  random,
  w_shape,
  area_split,
  greedy,
  monte_carlo,
  adaptive_greedy,
  adaptive_mc,
};

std::string to_string(StrategyKind kind);
StrategyKind strategy_kind_from_string(const std::string& name);

inline bool is_adaptive(StrategyKind k) {
  return k == StrategyKind::adaptive_greedy || k == StrategyKind::adaptive_mc;
}
inline bool is_next_best_view(StrategyKind k) {
  return k == StrategyKind::greedy || k == StrategyKind::monte_carlo;
}
inline bool is_area_coverage(StrategyKind k) {
  return k == StrategyKind::random || k == StrategyKind::w_shape ||
         k == StrategyKind::area_split;
}

struct StrategyConfig {
  StrategyKind kind{StrategyKind::random};
  int budget{50};
  std::uint64_t seed{0};
  int candidate_count{50};  // Monte Carlo draws per selection
  StrategyKind initial_plan{StrategyKind::area_split};  // adaptive methods

  void validate() const;
};

/// Ordered sampling plan; origin is the robot location the route starts
/// from.
struct Plan {
  std::vector<CellIndex> route;
  Location origin;
};

struct Route {
  std::vector<CellIndex> order;
  double length_m{0.0};
};

/// Cell membership flags in scan-order layout (j * nx + i).
using CellFlags = std::vector<std::uint8_t>;

inline CellFlags make_cell_flags(const FieldGrid& grid) {
  return CellFlags(static_cast<std::size_t>(grid.nx()) *
                       static_cast<std::size_t>(grid.ny()),
                   0);
}
inline std::size_t flag_index(const FieldGrid& grid, CellIndex c) {
  return static_cast<std::size_t>(c.j) * static_cast<std::size_t>(grid.nx()) +
         static_cast<std::size_t>(c.i);
}

/// Open-path tour: nearest-neighbour construction from the origin improved
/// by 2-opt and single-node relocation, multi-started on small instances.
/// Length sums Euclidean distances between consecutive cell centers,
/// origin leg included, no return leg.
Route tsp_route(const Location& origin, std::span<const CellIndex> targets,
                const FieldGrid& grid);

/// The nearest-neighbour construction alone (the local-search start).
Route tsp_route_nearest_neighbor(const Location& origin,
                                 std::span<const CellIndex> targets,
                                 const FieldGrid& grid);

/// One leaf rectangle of the area-split bisection.
struct AreaPart {
  double x{0.0};
  double y{0.0};
  double width_m{0.0};
  double height_m{0.0};

  double area() const { return width_m * height_m; }
  Location centroid() const { return {x + 0.5 * width_m, y + 0.5 * height_m}; }
};

/// The n parts plan_area_split places its targets in.
std::vector<AreaPart> area_split_parts(const FieldGrid& grid, int n);

/// n distinct reachable cells drawn uniformly, visited in TSP order.
Plan plan_random(const FieldGrid& grid, int n, std::uint64_t seed,
                 const Location& origin);

/// n waypoints equally spaced by arc length along a W-shaped polyline
/// spanning the field (vertices inset by half a cell), snapped to the
/// nearest reachable cell, duplicates collapsed. Visits in W order.
Plan plan_w_shape(const FieldGrid& grid, int n, const Location& origin);

/// Recursive longest-axis bisection into n equal-area parts; one target
/// per part centroid, snapped to reachable cells, TSP-ordered.
Plan plan_area_split(const FieldGrid& grid, int n, const Location& origin);

/// Highest-KV unvisited reachable cell; ties go to the lowest (j, i).
CellIndex next_greedy(const GridArray& kv_grid, const FieldGrid& grid,
                      const CellFlags& visited);

/// Roulette-wheel pick over `candidate_count` uniformly drawn unvisited
/// cells, weighted by KV (uniform fallback when all candidate KVs are 0).
CellIndex next_monte_carlo(const GridArray& kv_grid, const FieldGrid& grid,
                           const CellFlags& visited, int candidate_count,
                           Rng& rng);

/// Greedy plan adaptation: add the best unplanned cell when it beats every
/// current target's KV, drop targets more than two (population) standard
/// deviations below the target mean (skipped below three targets), then
/// re-route by TSP from the plan origin. `unavailable` marks cells already
/// sampled.
Plan adapt_plan_greedy(const Plan& plan, const GridArray& kv_grid,
                       const FieldGrid& grid, const CellFlags& unavailable);

/// Monte Carlo plan adaptation: swap in one KV-weighted draw from the
/// unplanned cells for the current minimum-KV target (route cardinality
/// preserved), then re-route by TSP.
Plan adapt_plan_mc(const Plan& plan, const GridArray& kv_grid,
                   const FieldGrid& grid, const CellFlags& unavailable,
                   int candidate_count, Rng& rng);

}  // namespace soilmap

#endif  // SOILMAP_EXPLORATION_HPP
