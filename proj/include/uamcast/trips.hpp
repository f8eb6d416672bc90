#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <vector>

#include "uamcast/geometry.hpp"
#include "uamcast/population.hpp"

namespace uamcast {

struct TripParams {
  double trips_per_person_per_day = 3.0;
  double share_slope = 0.2051;      // per ln(km)
  double share_intercept = 0.0592;  // at 1 km
};

/// Share of all trips shorter than d, from the empirical trip-length law
/// y = slope*ln(d) + intercept, clamped to [0, 1]. The raw law crosses zero
/// near 0.75 km and reaches 1 just past 100 km.
inline double cumulative_trip_share(double d_km, const TripParams& params = {}) {
  if (!(d_km > 0.0)) throw std::invalid_argument("cumulative_trip_share: distance must be positive");
  const double raw = params.share_slope * std::log(d_km) + params.share_intercept;
  return std::clamp(raw, 0.0, 1.0);
}

/// One distance class reachable from an origin cell: its exact key, the class
/// distance, the slice of the origin's trips falling into the class, and the
/// total destination population competing for that slice.
struct DistanceClassShare {
  std::int64_t key = 0;
  double distance_km = 0.0;
  double share = 0.0;
  double pop_sum = 0.0;
};

struct OriginRow {
  double generated = 0.0;  // trips/day produced by the origin cell
  double discarded = 0.0;  // share beyond the largest reachable distance
  std::vector<DistanceClassShare> classes;  // ascending by key; key 0 first
};

/// Daily trips per OD cell pair, stored class-grouped per origin instead of
/// as a dense N^2 table. A pair's value is
///   generated * class.share * pop(dest) / class.pop_sum
/// for the class matching its exact key, so the dense view is derivable on
/// demand and large cities stay tractable.
class ODMatrix {
 public:
  ODMatrix(CityGrid grid, PopulationField field, std::vector<OriginRow> rows)
      : grid_(std::move(grid)), field_(std::move(field)), rows_(std::move(rows)) {}

  const CityGrid& grid() const { return grid_; }
  const PopulationField& field() const { return field_; }
  std::size_t size() const { return rows_.size(); }
  const OriginRow& row(std::size_t origin) const { return rows_[origin]; }

  double trips(std::size_t origin, std::size_t dest) const {
    const OriginRow& r = rows_[origin];
    const std::int64_t key = grid_.pair_key(origin, dest);
    const auto it = std::lower_bound(
        r.classes.begin(), r.classes.end(), key,
        [](const DistanceClassShare& c, std::int64_t k) { return c.key < k; });
    if (it == r.classes.end() || it->key != key) return 0.0;
    if (it->pop_sum == 0.0) return 0.0;
    return r.generated * it->share * field_.per_cell[dest] / it->pop_sum;
  }

  /// Calls fn(dest_index, trips) for every destination cell of the origin,
  /// in grid order. Intended for tests and exports; the demand engine uses
  /// its own key-indexed fast path.
  template <typename Fn>
  void for_each_destination(std::size_t origin, Fn&& fn) const {
    for (std::size_t dest = 0; dest < grid_.size(); ++dest) {
      fn(dest, trips(origin, dest));
    }
  }

  double distributed(std::size_t origin) const {
    return rows_[origin].generated - rows_[origin].discarded;
  }

 private:
  CityGrid grid_;
  PopulationField field_;
  std::vector<OriginRow> rows_;
};

/// Builds the OD matrix with the class-grouped procedure, one origin at a
/// time:
///   1. generate trips proportional to the origin population,
///   2. list the distance classes reachable from the origin (intra first),
///   3. give each class the increment of the cumulative trip-length law,
///   4. split a class slice over its destinations by population weight,
///   5. book the share past the last reachable class as discarded.
inline ODMatrix build_od_matrix(const CityGrid& grid, const PopulationField& field,
                                const TripParams& params = {}) {
  const std::size_t n = grid.size();
  if (field.per_cell.size() != n) {
    throw std::invalid_argument("build_od_matrix: population field does not match grid");
  }
  if (!(params.trips_per_person_per_day > 0.0)) {
    throw std::invalid_argument("build_od_matrix: trips_per_person_per_day must be positive");
  }

  const auto scratch_size = static_cast<std::size_t>(grid.max_pair_key_bound()) + 1;
  std::vector<double> pop_by_key(scratch_size, 0.0);
  std::vector<char> key_seen(scratch_size, 0);
  std::vector<std::int64_t> touched;
  touched.reserve(256);

  std::vector<OriginRow> rows(n);
  for (std::size_t origin = 0; origin < n; ++origin) {
    OriginRow& row = rows[origin];
    row.generated = field.per_cell[origin] * params.trips_per_person_per_day;

    touched.clear();
    for (std::size_t dest = 0; dest < n; ++dest) {
      const std::int64_t key = grid.pair_key(origin, dest);
      const auto slot = static_cast<std::size_t>(key);
      if (!key_seen[slot]) {
        key_seen[slot] = 1;
        touched.push_back(key);
      }
      pop_by_key[slot] += field.per_cell[dest];
    }
    std::sort(touched.begin(), touched.end());

    row.classes.reserve(touched.size());
    double prev_share = 0.0;
    for (const std::int64_t key : touched) {
      const auto slot = static_cast<std::size_t>(key);
      DistanceClassShare cls;
      cls.key = key;
      cls.distance_km = grid.key_distance_km(key);
      cls.pop_sum = pop_by_key[slot];
      const double y = cumulative_trip_share(cls.distance_km, params);
      cls.share = key == 0 ? y : y - prev_share;
      prev_share = y;
      if (cls.pop_sum == 0.0 && cls.share > 0.0 && row.generated > 0.0) {
        throw std::invalid_argument(
            "build_od_matrix: cannot distribute trips to a zero-population distance class");
      }
      row.classes.push_back(cls);
      pop_by_key[slot] = 0.0;
      key_seen[slot] = 0;
    }
    row.discarded = row.generated * (1.0 - prev_share);
  }
  return ODMatrix(grid, field, std::move(rows));
}

}  // namespace uamcast
