#pragma once

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "uamcast/detail/numeric.hpp"
#include "uamcast/geometry.hpp"

namespace uamcast {

/// Ground alternative (AMT). The empirical average speed already absorbs
/// detours, so travel time uses the linear distance while monetary cost
/// applies the detour factor.
struct AmtParams {
  double speed_kmh = 18.0;
  double detour_factor = 1.2;
  double cost_slope = 6e-6;       // EUR per km per EUR GDP/capita
  double cost_intercept = 0.0703; // EUR per km
  double cost_adjustment = 1.7;   // market-level correction on the fitted rate
};

struct AirTaxiParams {
  double cruise_kmh = 100.0;
  double flight_detour = 1.05;
  double takeoff_min = 2.0;
  double landing_min = 2.0;
  double boarding_min = 3.0;
  double deboarding_min = 3.0;
  double ticket_price_per_km = 0.0;  // EUR/km, supplied per run or scenario

  double fixed_trip_min() const {
    return takeoff_min + landing_min + boarding_min + deboarding_min;
  }
};

enum class ScalingCurveKind { linear_knee, power };

/// Scaling factor in (0, 1] as a function of the value/reference ratio.
/// linear_knee rises linearly and saturates at ratio = param;
/// power is ratio^param capped at 1.
struct ScalingCurve {
  ScalingCurveKind kind = ScalingCurveKind::linear_knee;
  double param = 0.2;

  double operator()(double ratio) const {
    if (!(ratio >= 0.0)) throw std::invalid_argument("ScalingCurve: ratio must be non-negative");
    switch (kind) {
      case ScalingCurveKind::linear_knee:
        return std::min(1.0, ratio / param);
      case ScalingCurveKind::power:
        return std::min(1.0, std::pow(ratio, param));
    }
    throw std::logic_error("ScalingCurve: unknown kind");
  }
};

/// City-specific vertiport density model. Cities at or above both reference
/// values receive vd_ref unchanged; smaller or poorer cities are scaled down,
/// with GDP weighing in much earlier than area (the area factor only bites
/// below a fifth of the reference area).
struct DensityModel {
  double vd_ref = 0.0;           // vertiports per sq km, supplied per run or scenario
  double area_ref_sqkm = 3000.0;
  double gdp_ref_eur = 65000.0;  // reference-country GDP per capita
  ScalingCurve area_curve{ScalingCurveKind::linear_knee, 0.2};
  ScalingCurve gdp_curve{ScalingCurveKind::power, 2.0};
};

/// One itinerary's door-to-door time and monetary cost. Unavailable options
/// (air taxi with coinciding departure and arrival pads) are excluded from
/// the choice set entirely.
struct ModeOption {
  double time_h = 0.0;
  double cost_eur = 0.0;
  bool available = true;
};

inline double amt_cost_per_km(double gdp_per_capita, const AmtParams& params = {}) {
  if (!(gdp_per_capita >= 0.0)) {
    throw std::invalid_argument("amt_cost_per_km: gdp_per_capita must be non-negative");
  }
  return (params.cost_slope * gdp_per_capita + params.cost_intercept) * params.cost_adjustment;
}

inline ModeOption amt_option(double d_linear_km, double gdp_per_capita,
                             const AmtParams& params = {}) {
  if (!(d_linear_km >= 0.0)) {
    throw std::invalid_argument("amt_option: distance must be non-negative");
  }
  ModeOption opt;
  opt.time_h = d_linear_km / params.speed_kmh;
  opt.cost_eur = amt_cost_per_km(gdp_per_capita, params) * d_linear_km * params.detour_factor;
  opt.available = true;
  return opt;
}

inline double vertiport_density(double area_sqkm, double gdp_per_capita,
                                const DensityModel& model) {
  if (!(area_sqkm > 0.0)) throw std::invalid_argument("vertiport_density: area must be positive");
  if (!(gdp_per_capita >= 0.0)) {
    throw std::invalid_argument("vertiport_density: gdp_per_capita must be non-negative");
  }
  const double sf_area = model.area_curve(area_sqkm / model.area_ref_sqkm);
  const double sf_gdp = model.gdp_curve(gdp_per_capita / model.gdp_ref_eur);
  return model.vd_ref * sf_area * sf_gdp;
}

/// Vertiports for a city: density times area, round-half-up, floored at
/// five, the smallest network that still forms a meaningful mesh.
inline int vertiport_count(double area_sqkm, double vd_city) {
  if (!(area_sqkm > 0.0)) throw std::invalid_argument("vertiport_count: area must be positive");
  if (!(vd_city >= 0.0)) throw std::invalid_argument("vertiport_count: density must be non-negative");
  const double rounded = detail::round_half_up(vd_city * area_sqkm);
  return std::max(5, static_cast<int>(rounded));
}

/// Air-taxi option from resolved legs: ground access/egress distances and the
/// already-detoured pad-to-pad flight distance. This is the kernel behind
/// air_taxi_option; the demand engine calls it with precomputed legs.
inline ModeOption air_option_from_legs(double access_km, double egress_km, double flight_km,
                                       const AirTaxiParams& at, double gdp_per_capita,
                                       const AmtParams& amt) {
  ModeOption opt;
  opt.time_h = access_km / amt.speed_kmh + egress_km / amt.speed_kmh +
               flight_km / at.cruise_kmh + at.fixed_trip_min() / 60.0;
  const double ground_rate = amt_cost_per_km(gdp_per_capita, amt);
  opt.cost_eur = ground_rate * access_km * amt.detour_factor +
                 ground_rate * egress_km * amt.detour_factor +
                 at.ticket_price_per_km * flight_km;
  opt.available = true;
  return opt;
}

/// Three-leg air taxi itinerary: ground pre-carriage to the nearest vertiport,
/// detoured flight, ground onward carriage from the nearest vertiport to the
/// destination. When both ends resolve to the same pad no flight exists and
/// the option is unavailable.
inline ModeOption air_taxi_option(const Vec2& origin_center, const Vec2& dest_center,
                                  const VertiportNetwork& network, const AirTaxiParams& at,
                                  double gdp_per_capita, const AmtParams& amt) {
  if (network.count() < 5) {
    throw std::invalid_argument("air_taxi_option: network must have at least 5 vertiports");
  }
  const NearestVertiport v_o = nearest_vertiport(origin_center, network);
  const NearestVertiport v_d = nearest_vertiport(dest_center, network);
  if (v_o.index == v_d.index) {
    return {0.0, 0.0, false};
  }
  const double flight_km =
      distance(network.positions[v_o.index], network.positions[v_d.index]) * at.flight_detour;
  return air_option_from_legs(v_o.distance_km, v_d.distance_km, flight_km, at, gdp_per_capita, amt);
}

}  // namespace uamcast
