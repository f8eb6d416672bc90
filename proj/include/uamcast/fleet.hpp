#pragma once

#include <stdexcept>

namespace uamcast {

/// What the fleet-sizing flight-time numerator counts. Airborne time is
/// cruise plus take-off and landing; the turnaround variant adds boarding
/// and deboarding on top.
enum class FlightTimeBasis { airborne, airborne_plus_turnaround };

struct FleetParams {
  int seats_per_aircraft = 4;
  double seat_load_factor = 0.5;
  double utilization_per_hour = 0.33;
  FlightTimeBasis flight_time_basis = FlightTimeBasis::airborne;
};

/// Daily aircraft movements needed to carry the given passenger trips.
inline double movements(double daily_trips, const FleetParams& fp = {}) {
  if (!(daily_trips >= 0.0)) throw std::invalid_argument("movements: trips must be non-negative");
  return daily_trips / (fp.seats_per_aircraft * fp.seat_load_factor);
}

/// Vehicles needed to fly the given daily passenger flight hours at the
/// configured utilization. Real-valued; take the ceiling for procurement.
inline double fleet_size(double daily_flight_hours, const FleetParams& fp = {}) {
  if (!(daily_flight_hours >= 0.0)) {
    throw std::invalid_argument("fleet_size: flight hours must be non-negative");
  }
  return daily_flight_hours / (fp.seats_per_aircraft * fp.seat_load_factor * fp.utilization_per_hour);
}

}  // namespace uamcast
