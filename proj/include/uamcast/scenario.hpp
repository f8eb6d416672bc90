#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <numeric>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "uamcast/config.hpp"
#include "uamcast/demand.hpp"
#include "uamcast/detail/numeric.hpp"
#include "uamcast/detail/parallel.hpp"

namespace uamcast {

inline constexpr int market_first_year = 2030;
inline constexpr int market_last_year = 2050;

/// A lever's trajectory over the market window. Endpoint years return the
/// anchor values verbatim; interior years interpolate.
struct MarketPath {
  double value_2030 = 0.0;
  double value_2050 = 0.0;
  PathInterpolation interpolation = PathInterpolation::linear;

  double value(int year) const {
    if (year < market_first_year || year > market_last_year) {
      throw std::invalid_argument("MarketPath: year must be within [2030, 2050]");
    }
    if (year == market_first_year) return value_2030;
    if (year == market_last_year) return value_2050;
    const double f = static_cast<double>(year - market_first_year) /
                     static_cast<double>(market_last_year - market_first_year);
    if (interpolation == PathInterpolation::geometric) {
      return value_2030 * std::pow(value_2050 / value_2030, f);
    }
    return value_2030 + (value_2050 - value_2030) * f;
  }
};

enum class PriceTrack { optimistic, conservative };
enum class DensityTrack { high, low };

/// Ticket price declines linearly, losing a third of its starting value by
/// 2050 on either track.
inline MarketPath price_path(PriceTrack track, const ScenarioPathParams& params) {
  const double p0 = track == PriceTrack::optimistic ? params.price_optimistic_2030
                                                    : params.price_conservative_2030;
  return {p0, p0 * (2.0 / 3.0), PathInterpolation::linear};
}

/// Reference vertiport density grows tenfold over the window; the
/// interpolation shape between the anchors is configurable.
inline MarketPath density_path(DensityTrack track, const ScenarioPathParams& params) {
  if (track == DensityTrack::high) {
    return {params.vd_high_2030, params.vd_high_2050, params.density_interpolation};
  }
  return {params.vd_low_2030, params.vd_low_2050, params.density_interpolation};
}

/// The four named market scenarios combine a density track with a price
/// track: S1 best case, S2 worst case, S3 and S4 the mixed cases.
struct ScenarioSpec {
  std::string name;
  DensityTrack density_track = DensityTrack::high;
  PriceTrack price_track = PriceTrack::optimistic;
};

inline ScenarioSpec scenario_by_name(std::string_view name) {
  if (name == "S1") return {"S1", DensityTrack::high, PriceTrack::optimistic};
  if (name == "S2") return {"S2", DensityTrack::low, PriceTrack::conservative};
  if (name == "S3") return {"S3", DensityTrack::high, PriceTrack::conservative};
  if (name == "S4") return {"S4", DensityTrack::low, PriceTrack::optimistic};
  throw std::invalid_argument("scenario_by_name: unknown scenario '" + std::string(name) +
                              "' (expected S1, S2, S3, or S4)");
}

struct GlobalTotals {
  double daily_trips = 0.0;
  double daily_movements = 0.0;
  double daily_flight_hours = 0.0;
  double fleet_size = 0.0;
  int eligible_cities = 0;
};

/// All cities evaluated at one (year, price, density) point. vd_input is the
/// run-level lever; each CityResult carries the density actually applied to
/// that city. Cities are ordered by ascending city_id and totals are reduced
/// in that order, so output bytes do not depend on thread count.
struct GlobalResult {
  int year = 0;
  double price_eur_km = 0.0;
  double vd_input = 0.0;
  GlobalTotals totals;
  std::vector<CityResult> cities;
};

namespace detail {

inline std::vector<std::size_t> order_by_city_id(const std::vector<CityRecord>& records) {
  std::vector<std::size_t> order(records.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(), [&records](std::size_t a, std::size_t b) {
    return records[a].city_id < records[b].city_id;
  });
  return order;
}

inline GlobalResult reduce_point(int year, double price, double vd_input,
                                 std::vector<CityResult> cities) {
  GlobalResult out;
  out.year = year;
  out.price_eur_km = price;
  out.vd_input = vd_input;
  NeumaierSum trips, movements, hours, fleet;
  for (const CityResult& c : cities) {
    trips.add(c.daily_trips);
    movements.add(c.daily_movements);
    hours.add(c.daily_flight_hours);
    fleet.add(c.fleet_size);
    out.totals.eligible_cities += c.eligible ? 1 : 0;
  }
  out.totals.daily_trips = trips.value();
  out.totals.daily_movements = movements.value();
  out.totals.daily_flight_hours = hours.value();
  out.totals.fleet_size = fleet.value();
  out.cities = std::move(cities);
  return out;
}

}  // namespace detail

/// Evaluates every city at a single (year, price, density) point.
inline GlobalResult run_point(const std::vector<CityRecord>& records, int year, double price_eur_km,
                              double density_value, const RunConfig& cfg,
                              const GrowthTable& growth = {}, unsigned threads = 0) {
  const std::vector<std::size_t> order = detail::order_by_city_id(records);
  std::vector<CityResult> cities(records.size());
  detail::parallel_for(order.size(), threads, [&](std::size_t slot) {
    const CityRecord& rec = records[order[slot]];
    const CityWorkspace ws = make_workspace(rec, year, cfg, growth);
    const double vd_city = resolve_city_density(density_value, cfg.density_input, rec.area_sqkm,
                                                ws.projected().gdp_per_capita, cfg.density);
    cities[slot] = evaluate_city(ws, price_eur_km, vd_city, cfg);
  });
  return detail::reduce_point(year, price_eur_km, density_value, std::move(cities));
}

/// Price × density sensitivity sweep at a fixed year. Points are stored
/// price-major: point(pi, di) = points[pi * densities.size() + di]. Each
/// city's grid, population field, and trip matrix are built once and shared
/// by all points.
struct SweepResult {
  int year = 0;
  std::vector<double> prices;
  std::vector<double> densities;
  std::vector<GlobalResult> points;

  const GlobalResult& point(std::size_t price_index, std::size_t density_index) const {
    return points[price_index * densities.size() + density_index];
  }
};

inline SweepResult run_sweep(const std::vector<CityRecord>& records, int year,
                             const std::vector<double>& prices,
                             const std::vector<double>& densities, const RunConfig& cfg,
                             const GrowthTable& growth = {}, unsigned threads = 0) {
  if (prices.empty() || densities.empty()) {
    throw std::invalid_argument("run_sweep: prices and densities must be non-empty");
  }
  const std::vector<std::size_t> order = detail::order_by_city_id(records);
  const std::size_t n_points = prices.size() * densities.size();
  std::vector<std::vector<CityResult>> by_point(n_points);
  for (auto& v : by_point) v.resize(records.size());

  detail::parallel_for(order.size(), threads, [&](std::size_t slot) {
    const CityRecord& rec = records[order[slot]];
    const CityWorkspace ws = make_workspace(rec, year, cfg, growth);
    for (std::size_t di = 0; di < densities.size(); ++di) {
      const double vd_city = resolve_city_density(densities[di], cfg.density_input, rec.area_sqkm,
                                                  ws.projected().gdp_per_capita, cfg.density);
      for (std::size_t pi = 0; pi < prices.size(); ++pi) {
        by_point[pi * densities.size() + di][slot] = evaluate_city(ws, prices[pi], vd_city, cfg);
      }
    }
  });

  SweepResult out;
  out.year = year;
  out.prices = prices;
  out.densities = densities;
  out.points.reserve(n_points);
  for (std::size_t pi = 0; pi < prices.size(); ++pi) {
    for (std::size_t di = 0; di < densities.size(); ++di) {
      out.points.push_back(detail::reduce_point(year, prices[pi], densities[di],
                                                std::move(by_point[pi * densities.size() + di])));
    }
  }
  return out;
}

/// A scenario run: the named price and density tracks evaluated over the
/// requested years. Density levers always pass through the per-city
/// area/GDP scaling model here, whatever cfg.density_input says; the track
/// anchors are reference densities by definition.
struct ScenarioRun {
  ScenarioSpec spec;
  std::vector<GlobalResult> years;
};

inline ScenarioRun run_scenario(const std::vector<CityRecord>& records, const ScenarioSpec& spec,
                                const std::vector<int>& years, const RunConfig& cfg,
                                const GrowthTable& growth = {}, unsigned threads = 0) {
  if (years.empty()) throw std::invalid_argument("run_scenario: years must be non-empty");
  const MarketPath prices = price_path(spec.price_track, cfg.scenarios);
  const MarketPath densities = density_path(spec.density_track, cfg.scenarios);
  for (int y : years) {
    if (y < market_first_year || y > market_last_year) {
      throw std::invalid_argument("run_scenario: years must be within [2030, 2050]");
    }
  }

  const std::vector<std::size_t> order = detail::order_by_city_id(records);
  std::vector<std::vector<CityResult>> by_year(years.size());
  for (auto& v : by_year) v.resize(records.size());

  // One task per (city, year): the workspace depends on the projection year,
  // so there is nothing to share across years of the same city.
  detail::parallel_for(order.size() * years.size(), threads, [&](std::size_t task) {
    const std::size_t slot = task / years.size();
    const std::size_t yi = task % years.size();
    const CityRecord& rec = records[order[slot]];
    const int year = years[yi];
    const CityWorkspace ws = make_workspace(rec, year, cfg, growth);
    const double vd_city =
        resolve_city_density(densities.value(year), DensityInput::reference, rec.area_sqkm,
                             ws.projected().gdp_per_capita, cfg.density);
    by_year[yi][slot] = evaluate_city(ws, prices.value(year), vd_city, cfg);
  });

  ScenarioRun out;
  out.spec = spec;
  out.years.reserve(years.size());
  for (std::size_t yi = 0; yi < years.size(); ++yi) {
    out.years.push_back(detail::reduce_point(years[yi], prices.value(years[yi]),
                                             densities.value(years[yi]),
                                             std::move(by_year[yi])));
  }
  return out;
}

}  // namespace uamcast
