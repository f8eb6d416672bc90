#pragma once

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "uamcast/choice.hpp"
#include "uamcast/city.hpp"
#include "uamcast/config.hpp"
#include "uamcast/detail/numeric.hpp"
#include "uamcast/fleet.hpp"
#include "uamcast/geometry.hpp"
#include "uamcast/population.hpp"
#include "uamcast/transport.hpp"
#include "uamcast/trips.hpp"

namespace uamcast {

/// Forecast for one city at one price/density point. fleet_size is real
/// valued; fleet_size_ceil() is the procurable vehicle count.
struct CityResult {
  std::string city_id;
  int year = 0;
  double price_eur_km = 0.0;
  double vd_city = 0.0;  // effective vertiports per sq km used for this city
  int vertiport_count = 0;
  double daily_trips = 0.0;  // air-taxi passenger trips per day
  double daily_movements = 0.0;
  double daily_flight_hours = 0.0;
  double fleet_size = 0.0;
  bool eligible = false;

  long long fleet_size_ceil() const { return static_cast<long long>(std::ceil(fleet_size)); }
};

/// Everything about a city that does not depend on ticket price or vertiport
/// density: the projected demographics, the grid, the population field, and
/// the trip matrix. Build once, evaluate many price/density points against it.
class CityWorkspace {
 public:
  CityWorkspace(CityRecord record, int year, ProjectedCity projected, ODMatrix od)
      : record_(std::move(record)), year_(year), projected_(projected), od_(std::move(od)) {}

  const CityRecord& record() const { return record_; }
  int year() const { return year_; }
  const ProjectedCity& projected() const { return projected_; }
  const ODMatrix& od() const { return od_; }
  const CityGrid& grid() const { return od_.grid(); }

 private:
  CityRecord record_;
  int year_ = 0;
  ProjectedCity projected_;
  ODMatrix od_;
};

inline CityWorkspace make_workspace(const CityRecord& record, int year, const RunConfig& cfg,
                                    const GrowthTable& growth = {}) {
  const ProjectedCity projected = project_city(record, year, growth);
  const CityGrid grid = build_grid(record.area_sqkm, cfg.grid);
  const PopulationField field = distribute_population(grid, projected.population, cfg.population);
  ODMatrix od = build_od_matrix(grid, field, cfg.trips);
  return CityWorkspace(record, year, projected, std::move(od));
}

/// Turns a run-level density lever into the density applied to one city:
/// either verbatim, or as the reference value of the area/GDP scaling model.
inline double resolve_city_density(double density_value, DensityInput input, double area_sqkm,
                                   double gdp_per_capita, DensityModel model) {
  if (!(density_value >= 0.0)) {
    throw std::invalid_argument("resolve_city_density: density must be non-negative");
  }
  if (input == DensityInput::city) return density_value;
  model.vd_ref = density_value;
  return vertiport_density(area_sqkm, gdp_per_capita, model);
}

/// Core evaluation: mode choice over every OD cell pair, then aggregation to
/// daily trips, movements, flight hours, and fleet. Deterministic: the pair
/// loop is serial and in fixed grid order regardless of thread settings.
///
/// The per-pair work is O(1): ground generalized cost and the trip-volume
/// coefficient are precomputed per exact distance-class key, access legs per
/// cell, and flight legs per vertiport pair, so the loop only gathers,
/// evaluates one logistic share, and accumulates.
inline CityResult evaluate_city(const CityWorkspace& ws, double price_eur_km, double vd_city,
                                const RunConfig& cfg) {
  if (!(price_eur_km >= 0.0)) {
    throw std::invalid_argument("evaluate_city: price_eur_km must be non-negative");
  }
  if (!(vd_city >= 0.0)) {
    throw std::invalid_argument("evaluate_city: vd_city must be non-negative");
  }

  const CityGrid& grid = ws.grid();
  const PopulationField& field = ws.od().field();
  const std::size_t n = grid.size();
  const double gdp = ws.projected().gdp_per_capita;

  AirTaxiParams at = cfg.air_taxi;
  at.ticket_price_per_km = price_eur_km;

  const int n_verts = vertiport_count(ws.record().area_sqkm, vd_city);
  const VertiportNetwork network = place_vertiports(grid.radius_km(), n_verts);
  const std::size_t m = network.count();

  const double vtt = value_of_travel_time(gdp, cfg.choice);
  const double amt_gc_per_km =
      amt_cost_per_km(gdp, cfg.amt) * cfg.amt.detour_factor + vtt / cfg.amt.speed_kmh;

  // Access leg per cell: nearest pad index and the leg's generalized cost.
  std::vector<std::uint32_t> pad(n);
  std::vector<double> access_gc(n);
  for (std::size_t i = 0; i < n; ++i) {
    const NearestVertiport nv = nearest_vertiport(grid.center_of(i), network);
    pad[i] = static_cast<std::uint32_t>(nv.index);
    access_gc[i] = nv.distance_km * amt_gc_per_km;
  }

  // Flight leg per vertiport pair: generalized cost (ticket, onboard time,
  // fixed trip minutes) and the flight time booked against the fleet.
  const double fixed_gc = vtt * at.fixed_trip_min() / 60.0;
  const double fleet_fixed_min =
      at.takeoff_min + at.landing_min +
      (cfg.fleet.flight_time_basis == FlightTimeBasis::airborne_plus_turnaround
           ? at.boarding_min + at.deboarding_min
           : 0.0);
  std::vector<double> leg_gc(m * m, 0.0);
  std::vector<double> leg_fleet_h(m * m, 0.0);
  for (std::size_t a = 0; a < m; ++a) {
    for (std::size_t b = 0; b < m; ++b) {
      if (a == b) continue;
      const double flight_km =
          distance(network.positions[a], network.positions[b]) * at.flight_detour;
      leg_gc[a * m + b] = flight_km * (at.ticket_price_per_km + vtt / at.cruise_kmh) + fixed_gc;
      leg_fleet_h[a * m + b] = flight_km / at.cruise_kmh + fleet_fixed_min / 60.0;
    }
  }

  // Ground generalized cost and trip coefficient per exact distance class.
  const auto scratch_size = static_cast<std::size_t>(grid.max_pair_key_bound()) + 1;
  std::vector<double> gc_amt_by_key(scratch_size);
  for (std::size_t key = 0; key < scratch_size; ++key) {
    gc_amt_by_key[key] = grid.key_distance_km(static_cast<std::int64_t>(key)) * amt_gc_per_km;
  }
  std::vector<double> coeff_by_key(scratch_size, 0.0);

  detail::NeumaierSum trips_sum;
  detail::NeumaierSum hours_sum;
  const Cell* cells = grid.cells().data();
  const double* pop = field.per_cell.data();

  for (std::size_t o = 0; o < n; ++o) {
    const OriginRow& row = ws.od().row(o);
    for (const DistanceClassShare& cls : row.classes) {
      if (cls.pop_sum > 0.0) {
        coeff_by_key[static_cast<std::size_t>(cls.key)] = row.generated * cls.share / cls.pop_sum;
      }
    }

    const std::uint32_t vo = pad[o];
    const double gc_access_o = access_gc[o];
    const Cell co = cells[o];
    const double* leg_gc_row = leg_gc.data() + static_cast<std::size_t>(vo) * m;
    const double* leg_h_row = leg_fleet_h.data() + static_cast<std::size_t>(vo) * m;

    for (std::size_t j = 0; j < n; ++j) {
      if (j == o) continue;
      const std::uint32_t vj = pad[j];
      if (vj == vo) continue;  // no flight exists; the trip stays on the ground
      const std::int64_t dx = static_cast<std::int64_t>(co.ix) - cells[j].ix;
      const std::int64_t dy = static_cast<std::int64_t>(co.iy) - cells[j].iy;
      const auto key = static_cast<std::size_t>(dx * dx + dy * dy);
      const double pair_trips = coeff_by_key[key] * pop[j];
      if (pair_trips == 0.0) continue;
      const double gc_air = gc_access_o + access_gc[j] + leg_gc_row[vj];
      const double p_air = air_taxi_share(gc_air, gc_amt_by_key[key], cfg.choice);
      const double air_trips = pair_trips * p_air;
      trips_sum.add(air_trips);
      hours_sum.add(air_trips * leg_h_row[vj]);
    }

    for (const DistanceClassShare& cls : row.classes) {
      coeff_by_key[static_cast<std::size_t>(cls.key)] = 0.0;
    }
  }

  CityResult res;
  res.city_id = ws.record().city_id;
  res.year = ws.year();
  res.price_eur_km = price_eur_km;
  res.vd_city = vd_city;
  res.vertiport_count = n_verts;
  res.daily_trips = trips_sum.value();
  res.daily_movements = movements(res.daily_trips, cfg.fleet);
  res.daily_flight_hours = hours_sum.value();
  res.fleet_size = fleet_size(res.daily_flight_hours, cfg.fleet);
  res.eligible = res.daily_trips >= cfg.eligibility_threshold;
  return res;
}

/// One-shot end-to-end forecast for a single city. density_value follows
/// cfg.density_input (a per-city density, or a reference density scaled by
/// area and GDP).
inline CityResult city_demand(const CityRecord& record, int year, double price_eur_km,
                              double density_value, const RunConfig& cfg,
                              const GrowthTable& growth = {}) {
  const CityWorkspace ws = make_workspace(record, year, cfg, growth);
  const double vd_city = resolve_city_density(density_value, cfg.density_input,
                                              record.area_sqkm, ws.projected().gdp_per_capita,
                                              cfg.density);
  return evaluate_city(ws, price_eur_km, vd_city, cfg);
}

}  // namespace uamcast
