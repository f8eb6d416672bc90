#pragma once

#include <cmath>
#include <stdexcept>

#include "uamcast/transport.hpp"

namespace uamcast {

/// Binary logit over generalized cost. The mode constants default to zero
/// (no evidence either way on air-taxi preference), so the split depends
/// only on time and money.
struct ChoiceParams {
  double gc_coefficient = -0.25;  // utility per EUR of generalized cost, < 0
  double amt_constant = 0.0;
  double air_taxi_constant = 0.0;
  double vtt_slope = 0.0003;      // EUR/h per EUR GDP/capita
  double vtt_intercept = -0.3404; // EUR/h
};

/// Value of travel time as a linear function of wealth, floored at zero:
/// the fit goes negative below roughly 1135 EUR/capita, which is meaningless.
inline double value_of_travel_time(double gdp_per_capita, const ChoiceParams& params = {}) {
  if (!(gdp_per_capita >= 0.0)) {
    throw std::invalid_argument("value_of_travel_time: gdp_per_capita must be non-negative");
  }
  return std::max(0.0, params.vtt_slope * gdp_per_capita + params.vtt_intercept);
}

/// Monetary cost plus monetized door-to-door time.
inline double generalized_cost(const ModeOption& option, double vtt_eur_per_h) {
  if (!option.available) {
    throw std::invalid_argument("generalized_cost: option is not available");
  }
  return option.cost_eur + vtt_eur_per_h * option.time_h;
}

/// Probability of choosing the air taxi over the ground mode, computed in the
/// overflow-safe logistic difference form. Utility gaps far beyond +-700
/// saturate cleanly to 0 or 1 instead of producing NaN.
inline double air_taxi_share(double gc_air, double gc_amt, const ChoiceParams& params = {}) {
  if (!std::isfinite(gc_air) || !std::isfinite(gc_amt)) {
    throw std::invalid_argument("air_taxi_share: generalized costs must be finite");
  }
  if (!(params.gc_coefficient < 0.0)) {
    throw std::invalid_argument("air_taxi_share: gc_coefficient must be negative");
  }
  const double utility_gap = (params.amt_constant - params.air_taxi_constant) +
                             params.gc_coefficient * (gc_amt - gc_air);
  return 1.0 / (1.0 + std::exp(utility_gap));
}

}  // namespace uamcast
