#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <limits>
#include <random>
#include <set>

#include "uamcast/geometry.hpp"

using namespace uamcast;

TEST_CASE("grid covers exactly the cells whose centers fall inside the circle") {
  // area = pi * (2 km)^2 makes the radius exactly one default cell edge:
  // the center cell plus its four lattice neighbours qualify.
  const CityGrid grid = build_grid(4.0 * std::numbers::pi);
  REQUIRE(grid.size() == 5);
  REQUIRE(grid.radius_km() == 2.0);
  const Cell& center = grid.cells()[grid.center_index()];
  REQUIRE(center.ix == 0);
  REQUIRE(center.iy == 0);

  std::set<std::pair<int, int>> got;
  for (const Cell& c : grid.cells()) got.insert({c.ix, c.iy});
  const std::set<std::pair<int, int>> expected = {{0, 0}, {1, 0}, {-1, 0}, {0, 1}, {0, -1}};
  REQUIRE(got == expected);
}

TEST_CASE("hand-counted grid size for a 100 sqkm city") {
  // radius = sqrt(100/pi) = 5.6419 km, edge 2 km: keys ix^2+iy^2 <= 7.95
  // admit 1 + 4 + 4 + 4 + 8 = 21 cells.
  const CityGrid grid = build_grid(100.0);
  REQUIRE(grid.size() == 21);
}

TEST_CASE("tiny areas degenerate to the single center cell") {
  const CityGrid grid = build_grid(0.1);
  REQUIRE(grid.size() == 1);
  REQUIRE(grid.center_index() == 0);
  REQUIRE(grid.max_center_distance_km() == 0.0);
}

TEST_CASE("grid construction rejects non-positive inputs") {
  REQUIRE_THROWS_AS(build_grid(0.0), std::invalid_argument);
  REQUIRE_THROWS_AS(build_grid(-5.0), std::invalid_argument);
  REQUIRE_THROWS_AS(build_grid(100.0, GridSpec{0.0}), std::invalid_argument);
}

TEST_CASE("distance classes are exact, ascending, and include the intra class") {
  const CityGrid grid = build_grid(4.0 * std::numbers::pi);
  const auto classes = distance_classes(grid);
  REQUIRE(classes.size() == 4);
  REQUIRE(classes[0].key == 0);
  REQUIRE(classes[0].distance_km == 1.0);  // half the 2 km edge
  REQUIRE(classes[1].key == 1);
  REQUIRE(classes[1].distance_km == 2.0);
  REQUIRE(classes[2].key == 2);
  REQUIRE_THAT(classes[2].distance_km, Catch::Matchers::WithinRel(2.0 * std::sqrt(2.0), 1e-15));
  REQUIRE(classes[3].key == 4);
  REQUIRE(classes[3].distance_km == 4.0);
}

TEST_CASE("equal keys give bit-identical distances") {
  const CityGrid grid = build_grid(400.0);
  // (3,4) and (5,0) offsets both have key 25.
  REQUIRE(grid.key_distance_km(25) == grid.key_distance_km(25));
  REQUIRE(grid.key_distance_km(25) == 10.0);  // 2 km * sqrt(25)
}

TEST_CASE("pair keys never exceed the scratch-table bound") {
  std::mt19937 rng(11);
  std::uniform_real_distribution<double> area(5.0, 2000.0);
  for (int trial = 0; trial < 30; ++trial) {
    const CityGrid grid = build_grid(area(rng));
    const std::int64_t bound = grid.max_pair_key_bound();
    std::int64_t max_seen = 0;
    for (std::size_t i = 0; i < grid.size(); ++i) {
      for (std::size_t j = i + 1; j < grid.size(); ++j) {
        max_seen = std::max(max_seen, grid.pair_key(i, j));
      }
    }
    REQUIRE(max_seen <= bound);
  }
}

TEST_CASE("vertiport placement is deterministic and stays inside the disk") {
  const VertiportNetwork a = place_vertiports(10.0, 40);
  const VertiportNetwork b = place_vertiports(10.0, 40);
  REQUIRE(a.count() == 40);
  for (std::size_t i = 0; i < a.count(); ++i) {
    REQUIRE(a.positions[i].x == b.positions[i].x);
    REQUIRE(a.positions[i].y == b.positions[i].y);
    REQUIRE(std::hypot(a.positions[i].x, a.positions[i].y) < 10.0);
  }
}

TEST_CASE("vertiport layout spreads points apart") {
  const VertiportNetwork net = place_vertiports(10.0, 50);
  double min_pair = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < net.count(); ++i) {
    for (std::size_t j = i + 1; j < net.count(); ++j) {
      min_pair = std::min(min_pair, distance(net.positions[i], net.positions[j]));
    }
  }
  // A sunflower layout of 50 points in a 10 km disk keeps neighbours more
  // than a kilometre apart; collapsing points would betray an angle bug.
  REQUIRE(min_pair > 1.0);
}

TEST_CASE("vertiport placement enforces the minimum network and a real disk") {
  REQUIRE_THROWS_AS(place_vertiports(10.0, 4), std::invalid_argument);
  REQUIRE_THROWS_AS(place_vertiports(0.0, 5), std::invalid_argument);
  REQUIRE_NOTHROW(place_vertiports(10.0, 5));
}

TEST_CASE("nearest vertiport resolves ties to the lowest index") {
  VertiportNetwork net;
  net.positions = {{1.0, 0.0}, {-1.0, 0.0}, {0.0, 3.0}, {0.0, -3.0}, {5.0, 5.0}};
  const NearestVertiport nv = nearest_vertiport({0.0, 0.0}, net);
  REQUIRE(nv.index == 0);
  REQUIRE(nv.distance_km == 1.0);

  const NearestVertiport off = nearest_vertiport({-2.0, 0.0}, net);
  REQUIRE(off.index == 1);
}

TEST_CASE("nearest vertiport rejects an empty network") {
  VertiportNetwork net;
  REQUIRE_THROWS_AS(nearest_vertiport({0.0, 0.0}, net), std::invalid_argument);
}

TEST_CASE("golden angle constant") {
  REQUIRE_THAT(golden_angle_rad, Catch::Matchers::WithinAbs(2.39996322972865332, 1e-15));
}
