#pragma once

#include <cmath>
#include <fstream>
#include <initializer_list>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>

#include <json.hpp>

#include "uamcast/choice.hpp"
#include "uamcast/detail/numeric.hpp"
#include "uamcast/fleet.hpp"
#include "uamcast/geometry.hpp"
#include "uamcast/population.hpp"
#include "uamcast/transport.hpp"
#include "uamcast/trips.hpp"

namespace uamcast {

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// How a density value handed to sweep or run-city is interpreted:
/// applied to every city as-is, or as vd_ref scaled per city by area and GDP.
/// Scenario runs always use the reference interpretation.
enum class DensityInput { city, reference };

enum class PathInterpolation { geometric, linear };

struct ScenarioPathParams {
  double price_optimistic_2030 = 4.10;   // EUR/km
  double price_conservative_2030 = 5.70; // EUR/km
  double vd_high_2030 = 0.002;           // vertiports per sq km
  double vd_high_2050 = 0.02;
  double vd_low_2030 = 0.001;
  double vd_low_2050 = 0.01;
  PathInterpolation density_interpolation = PathInterpolation::geometric;
};

/// Everything tunable in one place. Ticket price and reference vertiport
/// density are run inputs, not configuration, and have no keys here.
struct RunConfig {
  GridSpec grid;
  DecayParams population;
  TripParams trips;
  AmtParams amt;
  AirTaxiParams air_taxi;
  DensityModel density;
  ChoiceParams choice;
  FleetParams fleet;
  double eligibility_threshold = 1000.0;  // daily air trips for a viable market
  DensityInput density_input = DensityInput::city;
  ScenarioPathParams scenarios;
};

namespace detail {

using nlohmann::json;

[[noreturn]] inline void config_fail(const std::string& msg) { throw ConfigError(msg); }

inline void reject_unknown_keys(const json& obj, std::string_view group,
                                std::initializer_list<const char*> allowed) {
  for (const auto& item : obj.items()) {
    bool known = false;
    for (const char* k : allowed) {
      if (item.key() == k) {
        known = true;
        break;
      }
    }
    if (!known) {
      config_fail("config: unknown key '" + (group.empty() ? "" : std::string(group) + ".") +
                  item.key() + "'");
    }
  }
}

inline void read_number(const json& obj, std::string_view group, const char* key, double& out) {
  if (!obj.contains(key)) return;
  const json& v = obj.at(key);
  if (!v.is_number()) {
    config_fail("config: " + std::string(group) + "." + key + " must be a number");
  }
  out = v.get<double>();
}

inline void read_int(const json& obj, std::string_view group, const char* key, int& out) {
  if (!obj.contains(key)) return;
  const json& v = obj.at(key);
  if (!v.is_number_integer()) {
    config_fail("config: " + std::string(group) + "." + key + " must be an integer");
  }
  out = v.get<int>();
}

inline void read_string(const json& obj, std::string_view group, const char* key,
                        std::string& out) {
  if (!obj.contains(key)) return;
  const json& v = obj.at(key);
  if (!v.is_string()) {
    config_fail("config: " + std::string(group) + "." + key + " must be a string");
  }
  out = v.get<std::string>();
}

inline void require(bool ok, std::string_view full_key, std::string_view range) {
  if (!ok) {
    config_fail("config: " + std::string(full_key) + " out of range (must be " +
                std::string(range) + ")");
  }
}

inline ScalingCurveKind parse_curve_kind(const std::string& s, std::string_view full_key) {
  if (s == "linear_knee") return ScalingCurveKind::linear_knee;
  if (s == "power") return ScalingCurveKind::power;
  config_fail("config: " + std::string(full_key) + " must be 'linear_knee' or 'power'");
}

}  // namespace detail

inline RunConfig config_from_json(const nlohmann::json& root) {
  using detail::config_fail;
  using detail::read_int;
  using detail::read_number;
  using detail::read_string;
  using detail::reject_unknown_keys;
  using detail::require;

  if (!root.is_object()) config_fail("config: top level must be a JSON object");
  reject_unknown_keys(root, "",
                      {"grid", "population", "trips", "amt", "air_taxi", "density", "choice",
                       "fleet", "eligibility_threshold", "density_input", "scenarios"});

  RunConfig cfg;

  if (root.contains("grid")) {
    const auto& g = root.at("grid");
    reject_unknown_keys(g, "grid", {"cell_edge_km"});
    read_number(g, "grid", "cell_edge_km", cfg.grid.cell_edge_km);
  }
  require(std::isfinite(cfg.grid.cell_edge_km) && cfg.grid.cell_edge_km > 0.0,
          "grid.cell_edge_km", "> 0");

  if (root.contains("population")) {
    const auto& g = root.at("population");
    reject_unknown_keys(g, "population",
                        {"center_to_edge_ratio", "edge_reference", "decay_denominator"});
    read_number(g, "population", "center_to_edge_ratio", cfg.population.center_to_edge_ratio);
    read_number(g, "population", "edge_reference", cfg.population.edge_reference);
    std::string denom = "max_distance";
    read_string(g, "population", "decay_denominator", denom);
    if (denom == "max_distance") {
      cfg.population.denominator = DecayDenominator::max_distance;
    } else if (denom == "distance") {
      cfg.population.denominator = DecayDenominator::distance;
    } else {
      config_fail("config: population.decay_denominator must be 'max_distance' or 'distance'");
    }
  }
  require(std::isfinite(cfg.population.center_to_edge_ratio) &&
              cfg.population.center_to_edge_ratio > 1.0,
          "population.center_to_edge_ratio", "> 1");
  require(std::isfinite(cfg.population.edge_reference) && cfg.population.edge_reference > 0.0,
          "population.edge_reference", "> 0");

  if (root.contains("trips")) {
    const auto& g = root.at("trips");
    reject_unknown_keys(g, "trips",
                        {"trips_per_person_per_day", "share_slope", "share_intercept"});
    read_number(g, "trips", "trips_per_person_per_day", cfg.trips.trips_per_person_per_day);
    read_number(g, "trips", "share_slope", cfg.trips.share_slope);
    read_number(g, "trips", "share_intercept", cfg.trips.share_intercept);
  }
  require(std::isfinite(cfg.trips.trips_per_person_per_day) &&
              cfg.trips.trips_per_person_per_day > 0.0,
          "trips.trips_per_person_per_day", "> 0");
  require(std::isfinite(cfg.trips.share_slope) && cfg.trips.share_slope >= 0.0,
          "trips.share_slope", ">= 0");
  require(std::isfinite(cfg.trips.share_intercept), "trips.share_intercept", "finite");

  if (root.contains("amt")) {
    const auto& g = root.at("amt");
    reject_unknown_keys(
        g, "amt", {"speed_kmh", "detour_factor", "cost_slope", "cost_intercept", "cost_adjustment"});
    read_number(g, "amt", "speed_kmh", cfg.amt.speed_kmh);
    read_number(g, "amt", "detour_factor", cfg.amt.detour_factor);
    read_number(g, "amt", "cost_slope", cfg.amt.cost_slope);
    read_number(g, "amt", "cost_intercept", cfg.amt.cost_intercept);
    read_number(g, "amt", "cost_adjustment", cfg.amt.cost_adjustment);
  }
  require(std::isfinite(cfg.amt.speed_kmh) && cfg.amt.speed_kmh > 0.0, "amt.speed_kmh", "> 0");
  require(std::isfinite(cfg.amt.detour_factor) && cfg.amt.detour_factor >= 1.0,
          "amt.detour_factor", ">= 1");
  require(std::isfinite(cfg.amt.cost_slope) && cfg.amt.cost_slope >= 0.0, "amt.cost_slope", ">= 0");
  require(std::isfinite(cfg.amt.cost_intercept) && cfg.amt.cost_intercept >= 0.0,
          "amt.cost_intercept", ">= 0");
  require(std::isfinite(cfg.amt.cost_adjustment) && cfg.amt.cost_adjustment > 0.0,
          "amt.cost_adjustment", "> 0");

  if (root.contains("air_taxi")) {
    const auto& g = root.at("air_taxi");
    reject_unknown_keys(g, "air_taxi",
                        {"cruise_kmh", "flight_detour", "takeoff_min", "landing_min",
                         "boarding_min", "deboarding_min"});
    read_number(g, "air_taxi", "cruise_kmh", cfg.air_taxi.cruise_kmh);
    read_number(g, "air_taxi", "flight_detour", cfg.air_taxi.flight_detour);
    read_number(g, "air_taxi", "takeoff_min", cfg.air_taxi.takeoff_min);
    read_number(g, "air_taxi", "landing_min", cfg.air_taxi.landing_min);
    read_number(g, "air_taxi", "boarding_min", cfg.air_taxi.boarding_min);
    read_number(g, "air_taxi", "deboarding_min", cfg.air_taxi.deboarding_min);
  }
  require(std::isfinite(cfg.air_taxi.cruise_kmh) && cfg.air_taxi.cruise_kmh > 0.0,
          "air_taxi.cruise_kmh", "> 0");
  require(std::isfinite(cfg.air_taxi.flight_detour) && cfg.air_taxi.flight_detour >= 1.0,
          "air_taxi.flight_detour", ">= 1");
  require(std::isfinite(cfg.air_taxi.takeoff_min) && cfg.air_taxi.takeoff_min >= 0.0,
          "air_taxi.takeoff_min", ">= 0");
  require(std::isfinite(cfg.air_taxi.landing_min) && cfg.air_taxi.landing_min >= 0.0,
          "air_taxi.landing_min", ">= 0");
  require(std::isfinite(cfg.air_taxi.boarding_min) && cfg.air_taxi.boarding_min >= 0.0,
          "air_taxi.boarding_min", ">= 0");
  require(std::isfinite(cfg.air_taxi.deboarding_min) && cfg.air_taxi.deboarding_min >= 0.0,
          "air_taxi.deboarding_min", ">= 0");

  if (root.contains("density")) {
    const auto& g = root.at("density");
    reject_unknown_keys(g, "density",
                        {"area_ref_sqkm", "gdp_ref_eur", "area_curve", "area_curve_param",
                         "gdp_curve", "gdp_curve_param"});
    read_number(g, "density", "area_ref_sqkm", cfg.density.area_ref_sqkm);
    read_number(g, "density", "gdp_ref_eur", cfg.density.gdp_ref_eur);
    std::string area_kind = "linear_knee";
    std::string gdp_kind = "power";
    read_string(g, "density", "area_curve", area_kind);
    read_string(g, "density", "gdp_curve", gdp_kind);
    cfg.density.area_curve.kind = detail::parse_curve_kind(area_kind, "density.area_curve");
    cfg.density.gdp_curve.kind = detail::parse_curve_kind(gdp_kind, "density.gdp_curve");
    read_number(g, "density", "area_curve_param", cfg.density.area_curve.param);
    read_number(g, "density", "gdp_curve_param", cfg.density.gdp_curve.param);
  }
  require(std::isfinite(cfg.density.area_ref_sqkm) && cfg.density.area_ref_sqkm > 0.0,
          "density.area_ref_sqkm", "> 0");
  require(std::isfinite(cfg.density.gdp_ref_eur) && cfg.density.gdp_ref_eur > 0.0,
          "density.gdp_ref_eur", "> 0");
  require(std::isfinite(cfg.density.area_curve.param) && cfg.density.area_curve.param > 0.0,
          "density.area_curve_param", "> 0");
  require(std::isfinite(cfg.density.gdp_curve.param) && cfg.density.gdp_curve.param > 0.0,
          "density.gdp_curve_param", "> 0");

  if (root.contains("choice")) {
    const auto& g = root.at("choice");
    reject_unknown_keys(g, "choice",
                        {"gc_coefficient", "amt_constant", "air_taxi_constant", "vtt_slope",
                         "vtt_intercept"});
    read_number(g, "choice", "gc_coefficient", cfg.choice.gc_coefficient);
    read_number(g, "choice", "amt_constant", cfg.choice.amt_constant);
    read_number(g, "choice", "air_taxi_constant", cfg.choice.air_taxi_constant);
    read_number(g, "choice", "vtt_slope", cfg.choice.vtt_slope);
    read_number(g, "choice", "vtt_intercept", cfg.choice.vtt_intercept);
  }
  require(std::isfinite(cfg.choice.gc_coefficient) && cfg.choice.gc_coefficient < 0.0,
          "choice.gc_coefficient", "< 0");
  require(std::isfinite(cfg.choice.amt_constant), "choice.amt_constant", "finite");
  require(std::isfinite(cfg.choice.air_taxi_constant), "choice.air_taxi_constant", "finite");
  require(std::isfinite(cfg.choice.vtt_slope) && cfg.choice.vtt_slope >= 0.0, "choice.vtt_slope",
          ">= 0");
  require(std::isfinite(cfg.choice.vtt_intercept), "choice.vtt_intercept", "finite");

  if (root.contains("fleet")) {
    const auto& g = root.at("fleet");
    reject_unknown_keys(g, "fleet",
                        {"seats_per_aircraft", "seat_load_factor", "utilization_per_hour",
                         "flight_time_basis"});
    read_int(g, "fleet", "seats_per_aircraft", cfg.fleet.seats_per_aircraft);
    read_number(g, "fleet", "seat_load_factor", cfg.fleet.seat_load_factor);
    read_number(g, "fleet", "utilization_per_hour", cfg.fleet.utilization_per_hour);
    std::string basis = "airborne";
    read_string(g, "fleet", "flight_time_basis", basis);
    if (basis == "airborne") {
      cfg.fleet.flight_time_basis = FlightTimeBasis::airborne;
    } else if (basis == "airborne_plus_turnaround") {
      cfg.fleet.flight_time_basis = FlightTimeBasis::airborne_plus_turnaround;
    } else {
      config_fail(
          "config: fleet.flight_time_basis must be 'airborne' or 'airborne_plus_turnaround'");
    }
  }
  require(cfg.fleet.seats_per_aircraft >= 1, "fleet.seats_per_aircraft", ">= 1");
  require(std::isfinite(cfg.fleet.seat_load_factor) && cfg.fleet.seat_load_factor > 0.0 &&
              cfg.fleet.seat_load_factor <= 1.0,
          "fleet.seat_load_factor", "in (0, 1]");
  require(std::isfinite(cfg.fleet.utilization_per_hour) && cfg.fleet.utilization_per_hour > 0.0,
          "fleet.utilization_per_hour", "> 0");

  detail::read_number(root, "", "eligibility_threshold", cfg.eligibility_threshold);
  require(std::isfinite(cfg.eligibility_threshold) && cfg.eligibility_threshold >= 0.0,
          "eligibility_threshold", ">= 0");

  {
    std::string mode = "city";
    detail::read_string(root, "", "density_input", mode);
    if (mode == "city") {
      cfg.density_input = DensityInput::city;
    } else if (mode == "reference") {
      cfg.density_input = DensityInput::reference;
    } else {
      config_fail("config: density_input must be 'city' or 'reference'");
    }
  }

  if (root.contains("scenarios")) {
    const auto& g = root.at("scenarios");
    reject_unknown_keys(g, "scenarios",
                        {"price_optimistic_2030", "price_conservative_2030", "vd_high_2030",
                         "vd_high_2050", "vd_low_2030", "vd_low_2050", "density_interpolation"});
    read_number(g, "scenarios", "price_optimistic_2030", cfg.scenarios.price_optimistic_2030);
    read_number(g, "scenarios", "price_conservative_2030", cfg.scenarios.price_conservative_2030);
    read_number(g, "scenarios", "vd_high_2030", cfg.scenarios.vd_high_2030);
    read_number(g, "scenarios", "vd_high_2050", cfg.scenarios.vd_high_2050);
    read_number(g, "scenarios", "vd_low_2030", cfg.scenarios.vd_low_2030);
    read_number(g, "scenarios", "vd_low_2050", cfg.scenarios.vd_low_2050);
    std::string interp = "geometric";
    read_string(g, "scenarios", "density_interpolation", interp);
    if (interp == "geometric") {
      cfg.scenarios.density_interpolation = PathInterpolation::geometric;
    } else if (interp == "linear") {
      cfg.scenarios.density_interpolation = PathInterpolation::linear;
    } else {
      config_fail("config: scenarios.density_interpolation must be 'geometric' or 'linear'");
    }
  }
  for (const auto& [v, k] : {std::pair<double, const char*>{cfg.scenarios.price_optimistic_2030,
                                                            "scenarios.price_optimistic_2030"},
                             {cfg.scenarios.price_conservative_2030,
                              "scenarios.price_conservative_2030"},
                             {cfg.scenarios.vd_high_2030, "scenarios.vd_high_2030"},
                             {cfg.scenarios.vd_high_2050, "scenarios.vd_high_2050"},
                             {cfg.scenarios.vd_low_2030, "scenarios.vd_low_2030"},
                             {cfg.scenarios.vd_low_2050, "scenarios.vd_low_2050"}}) {
    require(std::isfinite(v) && v > 0.0, k, "> 0");
  }

  return cfg;
}

/// Canonical JSON echo of the effective configuration: every key present,
/// keys sorted, suitable for digesting and for embedding in outputs.
inline nlohmann::json config_to_json(const RunConfig& cfg) {
  nlohmann::json j;
  j["grid"]["cell_edge_km"] = cfg.grid.cell_edge_km;
  j["population"]["center_to_edge_ratio"] = cfg.population.center_to_edge_ratio;
  j["population"]["edge_reference"] = cfg.population.edge_reference;
  j["population"]["decay_denominator"] =
      cfg.population.denominator == DecayDenominator::max_distance ? "max_distance" : "distance";
  j["trips"]["trips_per_person_per_day"] = cfg.trips.trips_per_person_per_day;
  j["trips"]["share_slope"] = cfg.trips.share_slope;
  j["trips"]["share_intercept"] = cfg.trips.share_intercept;
  j["amt"]["speed_kmh"] = cfg.amt.speed_kmh;
  j["amt"]["detour_factor"] = cfg.amt.detour_factor;
  j["amt"]["cost_slope"] = cfg.amt.cost_slope;
  j["amt"]["cost_intercept"] = cfg.amt.cost_intercept;
  j["amt"]["cost_adjustment"] = cfg.amt.cost_adjustment;
  j["air_taxi"]["cruise_kmh"] = cfg.air_taxi.cruise_kmh;
  j["air_taxi"]["flight_detour"] = cfg.air_taxi.flight_detour;
  j["air_taxi"]["takeoff_min"] = cfg.air_taxi.takeoff_min;
  j["air_taxi"]["landing_min"] = cfg.air_taxi.landing_min;
  j["air_taxi"]["boarding_min"] = cfg.air_taxi.boarding_min;
  j["air_taxi"]["deboarding_min"] = cfg.air_taxi.deboarding_min;
  j["density"]["area_ref_sqkm"] = cfg.density.area_ref_sqkm;
  j["density"]["gdp_ref_eur"] = cfg.density.gdp_ref_eur;
  j["density"]["area_curve"] =
      cfg.density.area_curve.kind == ScalingCurveKind::linear_knee ? "linear_knee" : "power";
  j["density"]["area_curve_param"] = cfg.density.area_curve.param;
  j["density"]["gdp_curve"] =
      cfg.density.gdp_curve.kind == ScalingCurveKind::linear_knee ? "linear_knee" : "power";
  j["density"]["gdp_curve_param"] = cfg.density.gdp_curve.param;
  j["choice"]["gc_coefficient"] = cfg.choice.gc_coefficient;
  j["choice"]["amt_constant"] = cfg.choice.amt_constant;
  j["choice"]["air_taxi_constant"] = cfg.choice.air_taxi_constant;
  j["choice"]["vtt_slope"] = cfg.choice.vtt_slope;
  j["choice"]["vtt_intercept"] = cfg.choice.vtt_intercept;
  j["fleet"]["seats_per_aircraft"] = cfg.fleet.seats_per_aircraft;
  j["fleet"]["seat_load_factor"] = cfg.fleet.seat_load_factor;
  j["fleet"]["utilization_per_hour"] = cfg.fleet.utilization_per_hour;
  j["fleet"]["flight_time_basis"] =
      cfg.fleet.flight_time_basis == FlightTimeBasis::airborne ? "airborne"
                                                               : "airborne_plus_turnaround";
  j["eligibility_threshold"] = cfg.eligibility_threshold;
  j["density_input"] = cfg.density_input == DensityInput::city ? "city" : "reference";
  j["scenarios"]["price_optimistic_2030"] = cfg.scenarios.price_optimistic_2030;
  j["scenarios"]["price_conservative_2030"] = cfg.scenarios.price_conservative_2030;
  j["scenarios"]["vd_high_2030"] = cfg.scenarios.vd_high_2030;
  j["scenarios"]["vd_high_2050"] = cfg.scenarios.vd_high_2050;
  j["scenarios"]["vd_low_2030"] = cfg.scenarios.vd_low_2030;
  j["scenarios"]["vd_low_2050"] = cfg.scenarios.vd_low_2050;
  j["scenarios"]["density_interpolation"] =
      cfg.scenarios.density_interpolation == PathInterpolation::geometric ? "geometric" : "linear";
  return j;
}

inline std::string config_digest(const RunConfig& cfg) {
  return detail::fnv1a64_hex(config_to_json(cfg).dump());
}

/// Loads a config file. An absent, empty, or whitespace-only document means
/// all defaults; unknown keys and out-of-range values are hard errors.
inline RunConfig load_config(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("config: cannot open '" + path + "'");
  std::stringstream buf;
  buf << in.rdbuf();
  const std::string text = buf.str();
  if (text.find_first_not_of(" \t\r\n") == std::string::npos) {
    return RunConfig{};
  }
  nlohmann::json root;
  try {
    root = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw ConfigError("config: parse error in '" + path + "': " + e.what());
  }
  return config_from_json(root);
}

}  // namespace uamcast
