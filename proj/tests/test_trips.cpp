#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <random>

#include "support/oracles.hpp"
#include "uamcast/trips.hpp"

using namespace uamcast;

TEST_CASE("cumulative trip share anchors") {
  REQUIRE(cumulative_trip_share(1.0) == 0.0592);  // ln(1) = 0, intercept survives exactly
  REQUIRE_THAT(cumulative_trip_share(40.0),
               Catch::Matchers::WithinAbs(0.8157891760387683, 1e-12));
  REQUIRE(cumulative_trip_share(100.0) == 1.0);  // raw value 1.0037 clamps
  REQUIRE(cumulative_trip_share(0.5) == 0.0);    // raw value -0.0830 clamps
  REQUIRE_THAT(cumulative_trip_share(std::exp(1.0)),
               Catch::Matchers::WithinAbs(0.2051 + 0.0592, 1e-15));
}

TEST_CASE("cumulative trip share is monotone non-decreasing") {
  double prev = 0.0;
  for (double d = 0.25; d <= 150.0; d *= 1.17) {
    const double y = cumulative_trip_share(d);
    REQUIRE(y >= prev);
    REQUIRE(y <= 1.0);
    prev = y;
  }
}

TEST_CASE("cumulative trip share rejects non-positive distances") {
  REQUIRE_THROWS_AS(cumulative_trip_share(0.0), std::invalid_argument);
  REQUIRE_THROWS_AS(cumulative_trip_share(-2.0), std::invalid_argument);
}

TEST_CASE("single-cell city keeps only the intra-cell share") {
  const CityGrid grid = build_grid(0.5);  // one 2 km cell, intra distance 1 km
  PopulationField field;
  field.per_cell = {100'000.0};
  field.total = 100'000.0;
  const ODMatrix od = build_od_matrix(grid, field);

  const OriginRow& row = od.row(0);
  REQUIRE_THAT(row.generated, Catch::Matchers::WithinRel(300'000.0, 1e-12));
  REQUIRE(row.classes.size() == 1);
  REQUIRE(row.classes[0].key == 0);
  REQUIRE_THAT(od.distributed(0), Catch::Matchers::WithinRel(300'000.0 * 0.0592, 1e-12));
  REQUIRE_THAT(row.discarded, Catch::Matchers::WithinRel(300'000.0 * (1.0 - 0.0592), 1e-12));
  REQUIRE_THAT(od.trips(0, 0), Catch::Matchers::WithinRel(17'760.0, 1e-9));
}

TEST_CASE("five-cell city: class shares telescope the cumulative law") {
  const CityGrid grid = build_grid(4.0 * std::numbers::pi);
  const PopulationField field = distribute_population(grid, 1'000'000.0);
  const ODMatrix od = build_od_matrix(grid, field);

  const OriginRow& center_row = od.row(grid.center_index());
  REQUIRE(center_row.classes.size() == 2);  // intra (1 km) and the four arms (2 km)
  REQUIRE(center_row.classes[0].key == 0);
  REQUIRE(center_row.classes[1].key == 1);
  // share between 1 km and 2 km: slope * ln(2)
  REQUIRE_THAT(center_row.classes[1].share,
               Catch::Matchers::WithinAbs(0.142164, 5e-6));
  REQUIRE_THAT(center_row.classes[1].share,
               Catch::Matchers::WithinRel(0.2051 * std::log(2.0), 1e-12));

  // an arm sees classes 0 (itself), 1 (center), 2 (side arms), 4 (opposite)
  std::size_t arm = grid.center_index() == 0 ? 1 : 0;
  const OriginRow& arm_row = od.row(arm);
  REQUIRE(arm_row.classes.size() == 4);
  REQUIRE(arm_row.classes[3].key == 4);
}

TEST_CASE("per-origin conservation: distributed plus discarded equals generated") {
  std::mt19937 rng(37);
  std::uniform_real_distribution<double> area(5.0, 300.0);
  for (int trial = 0; trial < 10; ++trial) {
    const CityGrid grid = build_grid(area(rng));
    const PopulationField field = distribute_population(grid, 1e6);
    const ODMatrix od = build_od_matrix(grid, field);
    for (std::size_t o = 0; o < grid.size(); ++o) {
      long double sum = 0.0L;
      od.for_each_destination(o, [&](std::size_t, double trips) { sum += trips; });
      REQUIRE_THAT(static_cast<double>(sum) + od.row(o).discarded,
                   Catch::Matchers::WithinRel(od.row(o).generated, 1e-9));
    }
  }
}

TEST_CASE("grouped matrix agrees with the naive per-pair oracle") {
  std::mt19937 rng(41);
  std::uniform_real_distribution<double> area(5.0, 110.0);
  const TripParams tp;
  for (int trial = 0; trial < 8; ++trial) {
    const CityGrid grid = build_grid(area(rng));
    REQUIRE(grid.size() <= 30);
    const PopulationField field = distribute_population(grid, 2e6);
    const ODMatrix od = build_od_matrix(grid, field, tp);
    for (std::size_t o = 0; o < grid.size(); ++o) {
      for (std::size_t j = 0; j < grid.size(); ++j) {
        const double expected = oracle::naive_od_trips(grid, field, tp, o, j);
        const double got = od.trips(o, j);
        if (expected == 0.0) {
          REQUIRE(got == 0.0);
        } else {
          REQUIRE_THAT(got, Catch::Matchers::WithinRel(expected, 1e-9));
        }
      }
    }
  }
}

TEST_CASE("a zero-population class with positive share is an error") {
  const CityGrid grid = build_grid(4.0 * std::numbers::pi);
  PopulationField field;
  field.per_cell = {1000.0, 0.0, 0.0, 0.0, 1000.0};  // only two opposite arms peopled
  field.total = 2000.0;
  REQUIRE_THROWS_AS(build_od_matrix(grid, field), std::invalid_argument);
}

TEST_CASE("an unpopulated city produces an empty matrix instead of an error") {
  const CityGrid grid = build_grid(4.0 * std::numbers::pi);
  PopulationField field;
  field.per_cell = {0.0, 0.0, 0.0, 0.0, 0.0};
  field.total = 0.0;
  const ODMatrix od = build_od_matrix(grid, field);
  for (std::size_t o = 0; o < grid.size(); ++o) {
    REQUIRE(od.row(o).generated == 0.0);
    od.for_each_destination(o, [&](std::size_t, double trips) { REQUIRE(trips == 0.0); });
  }
}

TEST_CASE("matrix construction validates its inputs") {
  const CityGrid grid = build_grid(100.0);
  PopulationField short_field;
  short_field.per_cell = {1.0};
  REQUIRE_THROWS_AS(build_od_matrix(grid, short_field), std::invalid_argument);

  const PopulationField field = distribute_population(grid, 1e6);
  TripParams bad;
  bad.trips_per_person_per_day = 0.0;
  REQUIRE_THROWS_AS(build_od_matrix(grid, field, bad), std::invalid_argument);
}
