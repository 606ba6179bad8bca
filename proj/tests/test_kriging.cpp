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

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <soilmap/kriging.hpp>
#include <soilmap/rng.hpp>

#include "support/oracles.hpp"

using namespace soilmap;

namespace {

std::vector<oracles::Point> to_oracle(const std::vector<Location>& locs) {
  std::vector<oracles::Point> pts;
  pts.reserve(locs.size());
  for (const Location& l : locs) pts.push_back({l.x, l.y});
  return pts;
}

}  // namespace

TEST_CASE("single sample forces unit weight") {
  const std::vector<Location> locs = {{3.0, 4.0}};
  const VariogramParams p{1.0, 10.0, 4.0};
  const Location target{6.0, 8.0};  // distance 5
  const KrigingSolution sol = solve_weights(locs, p, target);
  REQUIRE(sol.weights.size() == 1);
  CHECK(sol.weights[0] == doctest::Approx(1.0));
  // First equation of the augmented system: 0 * w + lambda = gamma(h).
  CHECK(sol.lagrange == doctest::Approx(semivariance(p, 5.0)));
  const double var = variance(sol, KrigingSystem(locs, p).gamma_to(target));
  CHECK(var == doctest::Approx(2.0 * semivariance(p, 5.0)));
}

TEST_CASE("two equidistant samples split the weight") {
  const std::vector<Location> locs = {{0.0, 0.0}, {10.0, 0.0}};
  const VariogramParams p{0.5, 20.0, 3.0};
  const KrigingSolution sol = solve_weights(locs, p, {5.0, 4.0});
  CHECK(sol.weights[0] == doctest::Approx(0.5));
  CHECK(sol.weights[1] == doctest::Approx(0.5));
}

TEST_CASE("fixed four-sample geometry matches the dense oracle") {
  const std::vector<Location> locs = {
      {0.0, 0.0}, {12.0, 3.0}, {4.0, 9.0}, {8.0, 15.0}};
  const VariogramParams p{0.8, 18.0, 5.0};
  const Location target{6.0, 6.0};
  const KrigingSolution sol = solve_weights(locs, p, target);
  const oracles::OkSolution ref =
      oracles::ok_solve(to_oracle(locs), 0.8, 18.0, 5.0, {6.0, 6.0});
  for (int i = 0; i < 4; ++i) {
    CHECK(sol.weights[i] == doctest::Approx(ref.weights[static_cast<std::size_t>(i)])
                                .epsilon(1e-8));
  }
  CHECK(sol.lagrange == doctest::Approx(ref.lagrange).epsilon(1e-8));
  const double var = variance(sol, KrigingSystem(locs, p).gamma_to(target));
  CHECK(var == doctest::Approx(ref.variance).epsilon(1e-8));
}

TEST_CASE("estimate is the weighted value combination") {
  KrigingSolution sol;
  sol.weights = Vector(2);
  sol.weights << 0.5, 0.5;
  Vector z(2);
  z << 100.0, 200.0;
  CHECK(estimate(sol, z) == doctest::Approx(150.0));

  Vector equal(2);
  equal << 42.0, 42.0;
  CHECK(estimate(sol, equal) == doctest::Approx(42.0));

  Vector wrong(3);
  CHECK_THROWS_AS(estimate(sol, wrong), InvalidArgument);
}

TEST_CASE("estimate shifts with the values (unbiasedness)") {
  Rng rng(11);
  std::vector<Location> locs;
  for (int i = 0; i < 5; ++i) {
    locs.push_back({30.0 * rng.uniform(), 30.0 * rng.uniform()});
  }
  const VariogramParams p{0.3, 25.0, 2.0};
  const KrigingSolution sol = solve_weights(locs, p, {15.0, 15.0});
  Vector z(5);
  for (int i = 0; i < 5; ++i) z[i] = 100.0 * rng.uniform();
  const double base = estimate(sol, z);
  const Vector shifted = z.array() + 37.5;
  CHECK(estimate(sol, shifted) == doctest::Approx(base + 37.5));
}

TEST_CASE("variance special cases") {
  SUBCASE("target on a sample with zero nugget is exact") {
    const std::vector<Location> locs = {{0.0, 0.0}, {10.0, 0.0}, {0.0, 10.0}};
    const VariogramParams p{0.0, 15.0, 4.0};
    const KrigingSystem system(locs, p);
    const KrigingSolution sol = system.solve(locs[1]);
    CHECK(variance(sol, system.gamma_to(locs[1])) <= 1e-10);
  }

  SUBCASE("far targets have larger variance than near ones") {
    std::vector<Location> locs;
    Rng rng(5);
    for (int i = 0; i < 8; ++i) {
      locs.push_back({10.0 * rng.uniform(), 10.0 * rng.uniform()});
    }
    const VariogramParams p{0.5, 12.0, 4.0};
    const KrigingSystem system(locs, p);
    const Location near{5.0, 5.0};
    const Location far{400.0, 400.0};
    const double var_near =
        variance(system.solve(near), system.gamma_to(near));
    const double var_far = variance(system.solve(far), system.gamma_to(far));
    CHECK(var_far > var_near);
    // Beyond the range every semivariance is the plateau; the oracle solve
    // agrees on the exact value.
    const oracles::OkSolution ref =
        oracles::ok_solve(to_oracle(locs), 0.5, 12.0, 4.0, {400.0, 400.0});
    CHECK(var_far == doctest::Approx(ref.variance).epsilon(1e-8));
  }

  SUBCASE("length mismatch") {
    KrigingSolution sol;
    sol.weights = Vector::Ones(2) * 0.5;
    CHECK_THROWS_AS(variance(sol, Vector::Ones(3)), InvalidArgument);
  }
}

TEST_CASE("weights ignore values and survive translation") {
  Rng rng(17);
  for (int trial = 0; trial < 20; ++trial) {
    std::vector<Location> locs;
    const int n = 2 + rng.uniform_int(6);
    for (int i = 0; i < n; ++i) {
      locs.push_back({50.0 * rng.uniform(), 50.0 * rng.uniform()});
    }
    const VariogramParams p{2.0 * rng.uniform(), 10.0 + 40.0 * rng.uniform(),
                            0.5 + 4.0 * rng.uniform()};
    const Location target{50.0 * rng.uniform(), 50.0 * rng.uniform()};
    const KrigingSolution sol = solve_weights(locs, p, target);
    CHECK(std::abs(sol.weights.sum() - 1.0) <= 1e-9);

    const Location shift{123.4, -76.2};
    std::vector<Location> moved;
    for (const Location& l : locs) moved.push_back({l.x + shift.x, l.y + shift.y});
    const KrigingSolution moved_sol = solve_weights(
        moved, p, {target.x + shift.x, target.y + shift.y});
    for (int i = 0; i < n; ++i) {
      CHECK(std::abs(sol.weights[i] - moved_sol.weights[i]) <= 1e-10);
    }
  }
}

TEST_CASE("duplicate locations: dedup resolves, raw system throws") {
  const VariogramParams p{0.0, 10.0, 3.0};
  const std::vector<Location> dup_locs = {{2.0, 2.0}, {2.0, 2.0}, {7.0, 7.0}};
  CHECK_THROWS_AS(KrigingSystem(dup_locs, p), SingularMatrix);

  const FieldGrid grid = build_grid(10.0, 10.0, 5.0);
  const std::vector<PointValue> samples = {
      {{2.5, 2.5}, 10.0}, {{2.5, 2.5}, 30.0}, {{7.5, 7.5}, 50.0}};
  const LayerMap map = krige_layer(samples, p, grid);
  // The duplicate pair averages to 20 and zero nugget keeps it exact.
  CHECK(map.estimates(0, 0) == doctest::Approx(20.0));
  CHECK(map.estimates(1, 1) == doctest::Approx(50.0));
}

TEST_CASE("krige_layer surfaces") {
  const FieldGrid grid = build_grid(15.0, 15.0, 5.0);
  const VariogramParams p{0.0, 12.0, 6.0};

  SUBCASE("single sample paints its value everywhere") {
    const LayerMap map = krige_layer({{{7.5, 7.5}, 123.0}}, p, grid);
    for (const CellIndex c : grid.reachable_cells()) {
      CHECK(map.estimates(c.j, c.i) == doctest::Approx(123.0));
    }
  }

  SUBCASE("two samples match a per-cell oracle solve") {
    const std::vector<PointValue> samples = {{{2.5, 2.5}, 80.0},
                                             {{12.5, 12.5}, 140.0}};
    const LayerMap map = krige_layer(samples, p, grid);
    const std::vector<oracles::Point> opts = {{2.5, 2.5}, {12.5, 12.5}};
    for (const CellIndex c : grid.reachable_cells()) {
      const Location center = grid.cell_center(c);
      const oracles::OkSolution ref =
          oracles::ok_solve(opts, 0.0, 12.0, 6.0, {center.x, center.y});
      const double est = 80.0 * ref.weights[0] + 140.0 * ref.weights[1];
      CHECK(map.estimates(c.j, c.i) == doctest::Approx(est).epsilon(1e-8));
      CHECK(map.variances(c.j, c.i) ==
            doctest::Approx(std::max(ref.variance, 0.0)).epsilon(1e-8));
    }
  }

  SUBCASE("estimates at sampled cells equal the sample values") {
    const std::vector<PointValue> samples = {{{2.5, 7.5}, 61.0},
                                             {{12.5, 2.5}, 99.0}};
    const LayerMap map = krige_layer(samples, p, grid);
    CHECK(map.estimates(1, 0) == doctest::Approx(61.0));
    CHECK(map.estimates(0, 2) == doctest::Approx(99.0));
    CHECK(map.variances(1, 0) <= 1e-8);
    CHECK(map.variances(0, 2) <= 1e-8);
  }
}

TEST_CASE("layered model aggregates variance across layers") {
  const FieldGrid grid = build_grid(20.0, 10.0, 5.0);
  const LayerSpec spec{2, 5.0};
  std::vector<Sample> samples;
  Vector v0(2), v1(2);
  v0 << 100.0, 300.0;
  v1 << 120.0, 310.0;
  samples.push_back({1, {2.5, 2.5}, std::nullopt, v0});
  samples.push_back({2, {17.5, 7.5}, std::nullopt, v1});

  SUBCASE("scaled params scale the variance surface linearly") {
    // Scaling nugget and sill by 3 scales kriging variance by 3 at equal
    // weights, so the two-layer mean grid is twice layer one's grid.
    const VariogramParams base{1.0, 15.0, 4.0};
    const VariogramParams scaled{3.0, 15.0, 12.0};
    const LayeredModel model =
        build_layered_model(samples, grid, spec, std::vector{base, scaled});
    for (const CellIndex c : grid.reachable_cells()) {
      const double v = model.layers[0].variances(c.j, c.i);
      CHECK(model.layers[1].variances(c.j, c.i) == doctest::Approx(3.0 * v));
      CHECK(model.mean_kv_grid(c.j, c.i) == doctest::Approx(2.0 * v));
    }
  }

  SUBCASE("single layer: mean grid equals the variance grid") {
    Vector one(1);
    one << 50.0;
    std::vector<Sample> single = {{1, {2.5, 2.5}, std::nullopt, one},
                                  {2, {17.5, 7.5}, std::nullopt, one}};
    const LayeredModel model = build_layered_model(
        single, grid, {1, 5.0}, std::vector{VariogramParams{1.0, 15.0, 4.0}});
    double mean = 0.0;
    for (const CellIndex c : grid.reachable_cells()) {
      CHECK(model.mean_kv_grid(c.j, c.i) ==
            doctest::Approx(model.layers[0].variances(c.j, c.i)));
      mean += model.mean_kv_grid(c.j, c.i);
    }
    CHECK(model.mean_kv == doctest::Approx(mean / grid.reachable_count()));
  }

  SUBCASE("layer count mismatches are rejected") {
    CHECK_THROWS_AS(
        build_layered_model(samples, grid, {3, 5.0},
                            std::vector<VariogramParams>(3, {1.0, 15.0, 4.0})),
        InvalidArgument);
  }

  SUBCASE("eight equal layers: scalar KV is the plain layer average") {
    std::vector<Sample> eight;
    Vector a = Vector::LinSpaced(8, 100.0, 240.0);
    Vector b = Vector::LinSpaced(8, 150.0, 290.0);
    eight.push_back({1, {2.5, 2.5}, std::nullopt, a});
    eight.push_back({2, {17.5, 7.5}, std::nullopt, b});
    const LayeredModel model = build_layered_model(
        eight, grid, {8, 5.0},
        std::vector<VariogramParams>(8, {1.0, 15.0, 4.0}));
    REQUIRE(model.layers.size() == 8);
    double acc = 0.0;
    int cells = 0;
    for (const CellIndex c : grid.reachable_cells()) {
      double layer_acc = 0.0;
      for (const LayerMap& layer : model.layers) {
        layer_acc += layer.variances(c.j, c.i);
      }
      CHECK(model.mean_kv_grid(c.j, c.i) == doctest::Approx(layer_acc / 8.0));
      acc += layer_acc / 8.0;
      ++cells;
    }
    CHECK(model.mean_kv == doctest::Approx(acc / cells));
  }
}

TEST_CASE("exact interpolation property with zero nugget") {
  Rng rng(23);
  for (int trial = 0; trial < 50; ++trial) {
    const int n = 2 + rng.uniform_int(7);
    std::vector<Location> locs;
    Vector values(n);
    for (int i = 0; i < n; ++i) {
      locs.push_back({80.0 * rng.uniform(), 80.0 * rng.uniform()});
      values[i] = 500.0 * rng.uniform();
    }
    const VariogramParams p{0.0, 20.0 + 60.0 * rng.uniform(),
                            1.0 + 5.0 * rng.uniform()};
    const KrigingSystem system(locs, p);
    for (int i = 0; i < n; ++i) {
      const KrigingSolution sol = system.solve(locs[static_cast<std::size_t>(i)]);
      CHECK(std::abs(estimate(sol, values) - values[i]) <= 1e-8);
      CHECK(variance(sol, system.gamma_to(locs[static_cast<std::size_t>(i)])) <=
            1e-8);
    }
  }
}

TEST_CASE("appending a sample collapses the variance at its cell") {
  const FieldGrid grid = build_grid(40.0, 40.0, 5.0);
  const VariogramParams p{0.0, 30.0, 5.0};
  std::vector<PointValue> samples = {{{2.5, 2.5}, 10.0}, {{37.5, 37.5}, 90.0}};
  const CellIndex probe{4, 3};
  const LayerMap before = krige_layer(samples, p, grid);
  CHECK(before.variances(probe.j, probe.i) > 1e-4);
  samples.push_back({grid.cell_center(probe), 55.0});
  const LayerMap after = krige_layer(samples, p, grid);
  CHECK(after.variances(probe.j, probe.i) <= 1e-8);
}
