#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <cmath>
#include <random>

#include "uamcast/population.hpp"

using namespace uamcast;

TEST_CASE("decay factor hits both anchors exactly") {
  const DecayParams params;
  // center: k * x^1, edge: k * x^0 -- both powers are exact.
  REQUIRE(density_factor(0.0, 10.0, params) == 20.0);
  REQUIRE(density_factor(10.0, 10.0, params) == 2.0);
  REQUIRE(density_factor(0.0, 10.0, params) / density_factor(10.0, 10.0, params) == 10.0);
}

TEST_CASE("decay factor is monotone decreasing in distance") {
  const DecayParams params;
  double prev = density_factor(0.0, 25.0, params);
  for (double d = 1.0; d <= 25.0; d += 1.0) {
    const double f = density_factor(d, 25.0, params);
    REQUIRE(f < prev);
    prev = f;
  }
}

TEST_CASE("degenerate single-cell city has factor one") {
  REQUIRE(density_factor(0.0, 0.0) == 1.0);
}

TEST_CASE("decay factor validates its domain") {
  REQUIRE_THROWS_AS(density_factor(-1.0, 10.0), std::invalid_argument);
  REQUIRE_THROWS_AS(density_factor(11.0, 10.0), std::invalid_argument);
  DecayParams bad_ratio;
  bad_ratio.center_to_edge_ratio = 1.0;
  REQUIRE_THROWS_AS(density_factor(1.0, 10.0, bad_ratio), std::invalid_argument);
  DecayParams bad_edge;
  bad_edge.edge_reference = 0.0;
  REQUIRE_THROWS_AS(density_factor(1.0, 10.0, bad_edge), std::invalid_argument);
}

TEST_CASE("five-cell city splits population 20:2:2:2:2") {
  const CityGrid grid = build_grid(4.0 * std::numbers::pi);
  const PopulationField field = distribute_population(grid, 1'000'000.0);
  REQUIRE(field.per_cell.size() == 5);

  const std::size_t center = grid.center_index();
  REQUIRE_THAT(field.per_cell[center],
               Catch::Matchers::WithinRel(1'000'000.0 * 20.0 / 28.0, 1e-12));
  double arm_value = -1.0;
  for (std::size_t i = 0; i < 5; ++i) {
    if (i == center) continue;
    if (arm_value < 0.0) {
      arm_value = field.per_cell[i];
      REQUIRE_THAT(arm_value, Catch::Matchers::WithinRel(1'000'000.0 * 2.0 / 28.0, 1e-12));
    } else {
      // identical distance class -> bit-identical population
      REQUIRE(field.per_cell[i] == arm_value);
    }
  }
}

TEST_CASE("population is conserved across random grids") {
  std::mt19937 rng(23);
  std::uniform_real_distribution<double> area(15.0, 4000.0);
  std::uniform_real_distribution<double> pop(5e5, 3e7);
  for (int trial = 0; trial < 50; ++trial) {
    const CityGrid grid = build_grid(area(rng));
    const double total = pop(rng);
    const PopulationField field = distribute_population(grid, total);
    long double sum = 0.0L;
    for (double v : field.per_cell) {
      REQUIRE(v > 0.0);
      sum += v;
    }
    REQUIRE_THAT(static_cast<double>(sum), Catch::Matchers::WithinRel(total, 1e-9));
  }
}

TEST_CASE("per-cell population decreases with distance from the center") {
  const CityGrid grid = build_grid(900.0);
  const PopulationField field = distribute_population(grid, 2e6);
  for (std::size_t i = 0; i < grid.size(); ++i) {
    for (std::size_t j = 0; j < grid.size(); ++j) {
      if (grid.center_distance_km(i) < grid.center_distance_km(j)) {
        REQUIRE(field.per_cell[i] > field.per_cell[j]);
      }
    }
  }
}

TEST_CASE("audit-mode denominator concentrates everything in the center") {
  DecayParams params;
  params.denominator = DecayDenominator::distance;
  const CityGrid grid = build_grid(100.0);
  const PopulationField field = distribute_population(grid, 1e6, params);
  for (std::size_t i = 0; i < grid.size(); ++i) {
    if (i == grid.center_index()) {
      REQUIRE(field.per_cell[i] == 1e6);
    } else {
      REQUIRE(field.per_cell[i] == 0.0);
    }
  }
}

TEST_CASE("single-cell city takes the whole population") {
  const CityGrid grid = build_grid(0.5);
  const PopulationField field = distribute_population(grid, 750'000.0);
  REQUIRE(field.per_cell.size() == 1);
  REQUIRE(field.per_cell[0] == 750'000.0);
}

TEST_CASE("distribution rejects a non-positive total") {
  const CityGrid grid = build_grid(100.0);
  REQUIRE_THROWS_AS(distribute_population(grid, 0.0), std::invalid_argument);
}
