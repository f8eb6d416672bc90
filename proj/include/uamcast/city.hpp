#pragma once

#include <cmath>
#include <cstdint>
#include <map>
#include <stdexcept>
#include <string>
#include <utility>

namespace uamcast {

/// Base year of the city database schema; growth compounds from here.
inline constexpr int database_base_year = 2022;

struct CityRecord {
  std::string city_id;
  std::string name;
  std::string country;
  double population_2022 = 0.0;
  double area_sqkm = 0.0;
  double gdp_per_capita_2022 = 0.0;
  double pop_growth_rate = 0.0;  // fraction per year
  double gdp_growth_rate = 0.0;  // fraction per year
};

/// Optional per-year growth overrides (city_id, year) -> rate. Years without
/// an entry fall back to the record's constant rate.
struct GrowthTable {
  std::map<std::pair<std::string, int>, double> pop_growth;
  std::map<std::pair<std::string, int>, double> gdp_growth;

  bool empty() const { return pop_growth.empty() && gdp_growth.empty(); }
};

struct ProjectedCity {
  double population = 0.0;
  double gdp_per_capita = 0.0;
};

/// Projects population and GDP per capita to the given year by compound
/// growth; the built-up area stays fixed. With a growth table, each year
/// from 2023 on uses its override when present.
inline ProjectedCity project_city(const CityRecord& record, int year,
                                  const GrowthTable& growth = {}) {
  if (year < database_base_year) {
    throw std::invalid_argument("project_city: year precedes the database base year 2022");
  }
  ProjectedCity out{record.population_2022, record.gdp_per_capita_2022};
  const int span = year - database_base_year;
  if (span == 0) return out;

  if (growth.empty()) {
    out.population *= std::pow(1.0 + record.pop_growth_rate, span);
    out.gdp_per_capita *= std::pow(1.0 + record.gdp_growth_rate, span);
    return out;
  }
  for (int y = database_base_year + 1; y <= year; ++y) {
    const auto key = std::make_pair(record.city_id, y);
    const auto pg = growth.pop_growth.find(key);
    const auto gg = growth.gdp_growth.find(key);
    out.population *= 1.0 + (pg != growth.pop_growth.end() ? pg->second : record.pop_growth_rate);
    out.gdp_per_capita *=
        1.0 + (gg != growth.gdp_growth.end() ? gg->second : record.gdp_growth_rate);
  }
  return out;
}

}  // namespace uamcast
