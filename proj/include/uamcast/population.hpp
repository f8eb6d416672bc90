#pragma once

#include <cmath>
#include <limits>
#include <stdexcept>
#include <vector>

#include "uamcast/detail/numeric.hpp"
#include "uamcast/geometry.hpp"

namespace uamcast {

/// Denominator of the decay exponent. Dividing by the cell's own distance
/// blows up at the center and cannot produce the stated center-to-edge
/// ratio; `max_distance` is the corrected default and `distance` is kept
/// only so the divergent variant can be audited.
enum class DecayDenominator { max_distance, distance };

struct DecayParams {
  double center_to_edge_ratio = 10.0;  // center density over edge density, > 1
  double edge_reference = 2.0;         // density factor at the outermost cell, > 0
  DecayDenominator denominator = DecayDenominator::max_distance;
};

/// Per-cell population, aligned with CityGrid::cells. Values are real;
/// rounding to whole persons happens only in report formatting.
struct PopulationField {
  std::vector<double> per_cell;
  double total = 0.0;
};

/// Monotone decay factor: x^((d_max-d)/d_max) * k, so the center cell gets
/// x*k and the outermost cell exactly k. A single-cell city (d_max = 0) has
/// no gradient to express; the factor is 1 by convention.
inline double density_factor(double d_km, double d_max_km, const DecayParams& params = {}) {
  if (!(params.center_to_edge_ratio > 1.0)) {
    throw std::invalid_argument("density_factor: center_to_edge_ratio must exceed 1");
  }
  if (!(params.edge_reference > 0.0)) {
    throw std::invalid_argument("density_factor: edge_reference must be positive");
  }
  if (d_max_km == 0.0) return 1.0;
  if (!(d_max_km > 0.0) || d_km < 0.0 || d_km > d_max_km) {
    throw std::invalid_argument("density_factor: require 0 <= d <= d_max");
  }
  double exponent;
  if (params.denominator == DecayDenominator::max_distance) {
    exponent = (d_max_km - d_km) / d_max_km;
  } else {
    if (d_km == 0.0) return std::numeric_limits<double>::infinity();
    exponent = (d_max_km - d_km) / d_km;
  }
  return params.edge_reference * std::pow(params.center_to_edge_ratio, exponent);
}

/// Splits the city total over cells in proportion to the decay factor.
/// Conservation is exact to rounding: sum(per_cell) == total_pop within
/// 1e-9 relative. Infinite factors (audit-mode denominator) absorb the
/// whole population, split equally among the diverging cells.
inline PopulationField distribute_population(const CityGrid& grid, double total_pop,
                                             const DecayParams& params = {}) {
  if (!(total_pop > 0.0)) {
    throw std::invalid_argument("distribute_population: total_pop must be positive");
  }
  const std::size_t n = grid.size();
  const double d_max = grid.max_center_distance_km();

  std::vector<double> factors(n);
  bool diverged = false;
  for (std::size_t i = 0; i < n; ++i) {
    factors[i] = density_factor(grid.center_distance_km(i), d_max, params);
    if (std::isinf(factors[i])) diverged = true;
  }

  PopulationField field;
  field.per_cell.resize(n);
  field.total = total_pop;
  if (diverged) {
    std::size_t inf_count = 0;
    for (double f : factors) inf_count += std::isinf(f) ? 1 : 0;
    for (std::size_t i = 0; i < n; ++i) {
      field.per_cell[i] = std::isinf(factors[i]) ? total_pop / static_cast<double>(inf_count) : 0.0;
    }
    return field;
  }

  detail::NeumaierSum sum;
  for (double f : factors) sum.add(f);
  const double norm = sum.value();
  for (std::size_t i = 0; i < n; ++i) {
    field.per_cell[i] = total_pop * factors[i] / norm;
  }
  return field;
}

}  // namespace uamcast
