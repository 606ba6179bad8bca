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

#include "soilmap/exploration.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace soilmap {

std::string to_string(StrategyKind kind) {
  switch (kind) {
    case StrategyKind::random: return "random";
    case StrategyKind::w_shape: return "w_shape";
    case StrategyKind::area_split: return "area_split";
    case StrategyKind::greedy: return "greedy";
    case StrategyKind::monte_carlo: return "monte_carlo";
    case StrategyKind::adaptive_greedy: return "adaptive_greedy";
    case StrategyKind::adaptive_mc: return "adaptive_mc";
  }
  throw InvalidArgument("to_string: unknown strategy kind");
}

StrategyKind strategy_kind_from_string(const std::string& name) {
  if (name == "random") return StrategyKind::random;
  if (name == "w_shape") return StrategyKind::w_shape;
  if (name == "area_split") return StrategyKind::area_split;
  if (name == "greedy") return StrategyKind::greedy;
  if (name == "monte_carlo") return StrategyKind::monte_carlo;
  if (name == "adaptive_greedy") return StrategyKind::adaptive_greedy;
  if (name == "adaptive_mc") return StrategyKind::adaptive_mc;
  throw InvalidArgument("unknown strategy kind '" + name + "'");
}

void StrategyConfig::validate() const {
  if (budget < 1) throw InvalidArgument("StrategyConfig: budget must be >= 1");
  const bool uses_mc =
      kind == StrategyKind::monte_carlo || kind == StrategyKind::adaptive_mc;
  if (uses_mc && candidate_count < 2) {
    throw InvalidArgument(
        "StrategyConfig: candidate_count must be >= 2 for Monte Carlo");
  }
  if (is_adaptive(kind) && initial_plan != StrategyKind::random &&
      initial_plan != StrategyKind::area_split) {
    throw InvalidArgument(
        "StrategyConfig: initial plan must be random or area_split");
  }
}

namespace {

double path_length(const Location& origin,
                   const std::vector<Location>& points) {
  double len = 0.0;
  Location prev = origin;
  for (const Location& p : points) {
    len += distance(prev, p);
    prev = p;
  }
  return len;
}

// Containing cell when reachable (so boundary points follow the cell_of
// floor rule), nearest reachable center otherwise.
CellIndex snap_to_reachable(const FieldGrid& grid, const Location& p) {
  if (grid.in_extent(p)) {
    const CellIndex c = grid.cell_of(p);
    if (grid.is_reachable(c)) return c;
  }
  return grid.nearest_reachable(p);
}

std::vector<int> nearest_neighbor_order(const Location& origin,
                                        std::span<const CellIndex> targets,
                                        const std::vector<Location>& centers,
                                        int forced_first = -1) {
  const int m = static_cast<int>(targets.size());
  std::vector<int> order;
  order.reserve(targets.size());
  std::vector<bool> used(targets.size(), false);
  Location cursor = origin;
  if (forced_first >= 0) {
    used[static_cast<std::size_t>(forced_first)] = true;
    order.push_back(forced_first);
    cursor = centers[static_cast<std::size_t>(forced_first)];
  }
  while (static_cast<int>(order.size()) < m) {
    int best = -1;
    double best_d = std::numeric_limits<double>::infinity();
    for (int k = 0; k < m; ++k) {
      if (used[static_cast<std::size_t>(k)]) continue;
      const double d = distance(cursor, centers[static_cast<std::size_t>(k)]);
      if (d < best_d ||
          (d == best_d && best >= 0 &&
           scan_less(targets[static_cast<std::size_t>(k)],
                     targets[static_cast<std::size_t>(best)]))) {
        best_d = d;
        best = k;
      }
    }
    used[static_cast<std::size_t>(best)] = true;
    order.push_back(best);
    cursor = centers[static_cast<std::size_t>(best)];
  }
  return order;
}

Route assemble_route(const Location& origin,
                     std::span<const CellIndex> targets,
                     const std::vector<Location>& centers,
                     const std::vector<int>& order) {
  Route route;
  route.order.reserve(targets.size());
  std::vector<Location> ordered;
  ordered.reserve(targets.size());
  for (const int k : order) {
    route.order.push_back(targets[static_cast<std::size_t>(k)]);
    ordered.push_back(centers[static_cast<std::size_t>(k)]);
  }
  route.length_m = path_length(origin, ordered);
  return route;
}

}  // namespace

Route tsp_route_nearest_neighbor(const Location& origin,
                                 std::span<const CellIndex> targets,
                                 const FieldGrid& grid) {
  if (targets.empty()) throw InvalidArgument("tsp_route: no targets");
  std::vector<Location> centers(targets.size());
  for (std::size_t k = 0; k < targets.size(); ++k) {
    centers[k] = grid.cell_center(targets[k]);
  }
  return assemble_route(origin, targets, centers,
                        nearest_neighbor_order(origin, targets, centers));
}

namespace {

// 2-opt over the open path (reversing order[i..j] rewires the edge into i
// and the edge out of j; there is no closing edge) plus single-node
// relocation whenever 2-opt stalls.
void improve_order(const Location& origin, const std::vector<Location>& centers,
                   std::vector<int>& order) {
  const int m = static_cast<int>(order.size());
  const auto point = [&](int pos) -> const Location& {
    return centers[static_cast<std::size_t>(order[static_cast<std::size_t>(pos)])];
  };

  const auto two_opt_pass = [&] {
    bool improved = false;
    for (int i = 0; i < m - 1; ++i) {
      const Location before = i == 0 ? origin : point(i - 1);
      for (int j = i + 1; j < m; ++j) {
        double delta = distance(before, point(j)) - distance(before, point(i));
        if (j + 1 < m) {
          delta += distance(point(i), point(j + 1)) -
                   distance(point(j), point(j + 1));
        }
        if (delta < -1e-12) {
          std::reverse(order.begin() + i, order.begin() + j + 1);
          improved = true;
        }
      }
    }
    return improved;
  };

  const auto relocate_pass = [&] {
    for (int k = 0; k < m; ++k) {
      const Location& moved = point(k);
      const Location prev_k = k == 0 ? origin : point(k - 1);
      double gain = distance(prev_k, moved);
      if (k + 1 < m) {
        gain += distance(moved, point(k + 1)) - distance(prev_k, point(k + 1));
      }
      for (int t = 0; t <= m; ++t) {
        if (t == k || t == k + 1) continue;  // reinsertion at the same spot
        const Location left = t == 0 ? origin : point(t - 1);
        double cost = distance(left, moved);
        if (t < m) cost += distance(moved, point(t)) - distance(left, point(t));
        if (cost - gain < -1e-12) {
          const int node = order[static_cast<std::size_t>(k)];
          order.erase(order.begin() + k);
          order.insert(order.begin() + (t > k ? t - 1 : t), node);
          return true;
        }
      }
    }
    return false;
  };

  int guard = 0;
  while (guard++ < 100 * m + 200) {
    if (two_opt_pass()) continue;
    if (!relocate_pass()) break;
  }
}

double order_length(const Location& origin, const std::vector<Location>& centers,
                    const std::vector<int>& order) {
  double len = 0.0;
  Location prev = origin;
  for (const int k : order) {
    len += distance(prev, centers[static_cast<std::size_t>(k)]);
    prev = centers[static_cast<std::size_t>(k)];
  }
  return len;
}

}  // namespace

Route tsp_route(const Location& origin, std::span<const CellIndex> targets,
                const FieldGrid& grid) {
  if (targets.empty()) throw InvalidArgument("tsp_route: no targets");
  const int m = static_cast<int>(targets.size());
  std::vector<Location> centers(targets.size());
  for (std::size_t k = 0; k < targets.size(); ++k) {
    centers[k] = grid.cell_center(targets[k]);
  }

  // Local search can strand a short path in a compound optimum; on small
  // instances every node gets a turn as the forced first hop and the best
  // local optimum wins. Larger instances keep the single NN start.
  constexpr int kMultiStartLimit = 9;
  std::vector<int> best_order = nearest_neighbor_order(origin, targets, centers);
  improve_order(origin, centers, best_order);
  double best_len = order_length(origin, centers, best_order);
  if (m <= kMultiStartLimit) {
    for (int first = 0; first < m; ++first) {
      std::vector<int> order =
          nearest_neighbor_order(origin, targets, centers, first);
      improve_order(origin, centers, order);
      const double len = order_length(origin, centers, order);
      if (len < best_len - 1e-12) {
        best_len = len;
        best_order = std::move(order);
      }
    }
  }

  return assemble_route(origin, targets, centers, best_order);
}

Plan plan_random(const FieldGrid& grid, int n, std::uint64_t seed,
                 const Location& origin) {
  if (n < 1 || n > grid.reachable_count()) {
    throw InvalidArgument("plan_random: n must be in [1, reachable cells]");
  }
  Rng rng(seed);
  const std::vector<int> picks =
      rng.sample_without_replacement(grid.reachable_count(), n);
  std::vector<CellIndex> targets;
  targets.reserve(picks.size());
  for (const int p : picks) {
    targets.push_back(grid.reachable_cells()[static_cast<std::size_t>(p)]);
  }
  return {tsp_route(origin, targets, grid).order, origin};
}

Plan plan_w_shape(const FieldGrid& grid, int n, const Location& origin) {
  if (n < 5) throw InvalidArgument("plan_w_shape: need n >= 5 waypoints");
  const double inset = 0.5 * grid.cell_size();
  const double x0 = grid.origin().x + inset;
  const double x1 = grid.origin().x + grid.extent_x() - inset;
  const double yb = grid.origin().y + inset;
  const double yt = grid.origin().y + grid.extent_y() - inset;
  const std::vector<Location> vertices = {
      {x0, yt},
      {x0 + 0.25 * (x1 - x0), yb},
      {x0 + 0.50 * (x1 - x0), yt},
      {x0 + 0.75 * (x1 - x0), yb},
      {x1, yt},
  };

  std::vector<double> cum{0.0};
  for (std::size_t s = 1; s < vertices.size(); ++s) {
    cum.push_back(cum.back() + distance(vertices[s - 1], vertices[s]));
  }
  const double total = cum.back();

  std::vector<CellIndex> route;
  for (int k = 0; k < n; ++k) {
    const double s = total * static_cast<double>(k) / (n - 1);
    std::size_t seg = 1;
    while (seg + 1 < cum.size() && s > cum[seg]) ++seg;
    const double t = cum[seg] > cum[seg - 1]
                         ? (s - cum[seg - 1]) / (cum[seg] - cum[seg - 1])
                         : 0.0;
    const Location p{
        vertices[seg - 1].x + t * (vertices[seg].x - vertices[seg - 1].x),
        vertices[seg - 1].y + t * (vertices[seg].y - vertices[seg - 1].y)};
    const CellIndex c = snap_to_reachable(grid, p);
    if (std::find(route.begin(), route.end(), c) == route.end()) {
      route.push_back(c);
    }
  }
  return {std::move(route), origin};
}

namespace {

// Bisect the longest axis proportionally to the target counts, so every
// leaf ends up with exactly 1/n of the field area.
void split_rect(const AreaPart& r, int n, std::vector<AreaPart>& out) {
  if (n == 1) {
    out.push_back(r);
    return;
  }
  const int n1 = n / 2;
  const int n2 = n - n1;
  const double f = static_cast<double>(n1) / n;
  if (r.width_m >= r.height_m) {
    split_rect({r.x, r.y, r.width_m * f, r.height_m}, n1, out);
    split_rect({r.x + r.width_m * f, r.y, r.width_m * (1.0 - f), r.height_m},
               n2, out);
  } else {
    split_rect({r.x, r.y, r.width_m, r.height_m * f}, n1, out);
    split_rect({r.x, r.y + r.height_m * f, r.width_m, r.height_m * (1.0 - f)},
               n2, out);
  }
}

}  // namespace

std::vector<AreaPart> area_split_parts(const FieldGrid& grid, int n) {
  if (n < 1 || n > grid.reachable_count()) {
    throw InvalidArgument("area_split_parts: n must be in [1, reachable cells]");
  }
  std::vector<AreaPart> parts;
  parts.reserve(static_cast<std::size_t>(n));
  split_rect({grid.origin().x, grid.origin().y, grid.extent_x(),
              grid.extent_y()},
             n, parts);
  return parts;
}

Plan plan_area_split(const FieldGrid& grid, int n, const Location& origin) {
  std::vector<Location> centroids;
  centroids.reserve(static_cast<std::size_t>(n));
  for (const AreaPart& part : area_split_parts(grid, n)) {
    centroids.push_back(part.centroid());
  }

  // Snap to reachable cells; a mask can fold two centroids onto one cell,
  // in which case the later one takes the nearest unused cell instead.
  std::vector<CellIndex> targets;
  CellFlags taken = make_cell_flags(grid);
  for (const Location& p : centroids) {
    CellIndex c = snap_to_reachable(grid, p);
    if (taken[flag_index(grid, c)]) {
      double best_d = std::numeric_limits<double>::infinity();
      CellIndex best = c;
      for (const CellIndex cand : grid.reachable_cells()) {
        if (taken[flag_index(grid, cand)]) continue;
        const double d = distance(p, grid.cell_center(cand));
        if (d < best_d) {
          best_d = d;
          best = cand;
        }
      }
      c = best;
    }
    taken[flag_index(grid, c)] = 1;
    targets.push_back(c);
  }
  return {tsp_route(origin, targets, grid).order, origin};
}

CellIndex next_greedy(const GridArray& kv_grid, const FieldGrid& grid,
                      const CellFlags& visited) {
  int best = -1;
  double best_kv = -std::numeric_limits<double>::infinity();
  const std::vector<CellIndex>& cells = grid.reachable_cells();
  for (std::size_t k = 0; k < cells.size(); ++k) {
    if (visited[flag_index(grid, cells[k])]) continue;
    const double kv = kv_grid(cells[k].j, cells[k].i);
    if (kv > best_kv) {  // scan order breaks ties toward the lowest (j, i)
      best_kv = kv;
      best = static_cast<int>(k);
    }
  }
  if (best < 0) throw Exhausted("next_greedy: no unvisited reachable cell");
  return cells[static_cast<std::size_t>(best)];
}

CellIndex next_monte_carlo(const GridArray& kv_grid, const FieldGrid& grid,
                           const CellFlags& visited, int candidate_count,
                           Rng& rng) {
  if (candidate_count < 1) {
    throw InvalidArgument("next_monte_carlo: candidate_count must be >= 1");
  }
  std::vector<CellIndex> open;
  for (const CellIndex c : grid.reachable_cells()) {
    if (!visited[flag_index(grid, c)]) open.push_back(c);
  }
  if (open.empty()) {
    throw Exhausted("next_monte_carlo: no unvisited reachable cell");
  }
  const int k = std::min<int>(candidate_count, static_cast<int>(open.size()));
  const std::vector<int> picks =
      rng.sample_without_replacement(static_cast<int>(open.size()), k);

  double total = 0.0;
  for (const int p : picks) {
    const CellIndex c = open[static_cast<std::size_t>(p)];
    total += kv_grid(c.j, c.i);
  }
  if (total <= 0.0) {  // all-zero KV: fall back to a uniform pick
    return open[static_cast<std::size_t>(picks[static_cast<std::size_t>(
        rng.uniform_int(k))])];
  }
  const double r = rng.uniform() * total;
  double acc = 0.0;
  for (const int p : picks) {
    const CellIndex c = open[static_cast<std::size_t>(p)];
    acc += kv_grid(c.j, c.i);
    if (r < acc) return c;
  }
  return open[static_cast<std::size_t>(picks.back())];
}

namespace {

CellFlags flags_with_route(const FieldGrid& grid, const CellFlags& unavailable,
                           const std::vector<CellIndex>& route) {
  CellFlags flags = unavailable;
  for (const CellIndex c : route) flags[flag_index(grid, c)] = 1;
  return flags;
}

}  // namespace

Plan adapt_plan_greedy(const Plan& plan, const GridArray& kv_grid,
                       const FieldGrid& grid, const CellFlags& unavailable) {
  if (plan.route.empty()) throw InvalidArgument("adapt_plan_greedy: empty plan");
  std::vector<CellIndex> route = plan.route;

  double max_target_kv = -std::numeric_limits<double>::infinity();
  for (const CellIndex c : route) {
    max_target_kv = std::max(max_target_kv, kv_grid(c.j, c.i));
  }
  const CellFlags blocked = flags_with_route(grid, unavailable, route);
  int best = -1;
  double best_kv = -std::numeric_limits<double>::infinity();
  const std::vector<CellIndex>& cells = grid.reachable_cells();
  for (std::size_t k = 0; k < cells.size(); ++k) {
    if (blocked[flag_index(grid, cells[k])]) continue;
    const double kv = kv_grid(cells[k].j, cells[k].i);
    if (kv > best_kv) {
      best_kv = kv;
      best = static_cast<int>(k);
    }
  }
  if (best >= 0 && best_kv > max_target_kv) {
    route.push_back(cells[static_cast<std::size_t>(best)]);
  }

  if (route.size() >= 3) {
    double mean = 0.0;
    for (const CellIndex c : route) mean += kv_grid(c.j, c.i);
    mean /= static_cast<double>(route.size());
    double var = 0.0;
    for (const CellIndex c : route) {
      const double d = kv_grid(c.j, c.i) - mean;
      var += d * d;
    }
    var /= static_cast<double>(route.size());
    const double threshold = mean - 2.0 * std::sqrt(var);
    std::erase_if(route, [&](CellIndex c) {
      return kv_grid(c.j, c.i) < threshold;
    });
  }

  return {tsp_route(plan.origin, route, grid).order, plan.origin};
}

Plan adapt_plan_mc(const Plan& plan, const GridArray& kv_grid,
                   const FieldGrid& grid, const CellFlags& unavailable,
                   int candidate_count, Rng& rng) {
  if (plan.route.empty()) throw InvalidArgument("adapt_plan_mc: empty plan");
  std::vector<CellIndex> route = plan.route;
  const CellFlags blocked = flags_with_route(grid, unavailable, route);

  bool any_open = false;
  for (const CellIndex c : grid.reachable_cells()) {
    if (!blocked[flag_index(grid, c)]) {
      any_open = true;
      break;
    }
  }
  if (any_open) {
    const CellIndex incoming =
        next_monte_carlo(kv_grid, grid, blocked, candidate_count, rng);
    std::size_t drop = 0;
    for (std::size_t k = 1; k < route.size(); ++k) {
      const double kv = kv_grid(route[k].j, route[k].i);
      const double kv_drop = kv_grid(route[drop].j, route[drop].i);
      if (kv < kv_drop || (kv == kv_drop && scan_less(route[k], route[drop]))) {
        drop = k;
      }
    }
    route.erase(route.begin() + static_cast<std::ptrdiff_t>(drop));
    route.push_back(incoming);
  }

  return {tsp_route(plan.origin, route, grid).order, plan.origin};
}

}  // namespace soilmap
