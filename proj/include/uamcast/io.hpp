#pragma once

#include <charconv>
#include <cstddef>
#include <fstream>
#include <ostream>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <system_error>
#include <utility>
#include <vector>

#include <json.hpp>

#include "uamcast/city.hpp"
#include "uamcast/config.hpp"
#include "uamcast/demand.hpp"
#include "uamcast/detail/numeric.hpp"
#include "uamcast/scenario.hpp"
#include "uamcast/trips.hpp"

namespace uamcast {

// ---------------------------------------------------------------------------
// CSV primitives. Line-based: quoted fields support embedded commas and
// doubled quotes, but not embedded newlines.
// ---------------------------------------------------------------------------

namespace detail {

inline std::string csv_escape(std::string_view field) {
  const bool needs_quotes = field.find_first_of(",\"\r\n") != std::string_view::npos;
  if (!needs_quotes) return std::string(field);
  std::string out;
  out.reserve(field.size() + 2);
  out.push_back('"');
  for (char c : field) {
    if (c == '"') out.push_back('"');
    out.push_back(c);
  }
  out.push_back('"');
  return out;
}

inline std::vector<std::string> split_csv_line(std::string_view line, bool& ok) {
  std::vector<std::string> fields;
  std::string cur;
  bool in_quotes = false;
  std::size_t i = 0;
  ok = true;
  while (i < line.size()) {
    const char c = line[i];
    if (in_quotes) {
      if (c == '"') {
        if (i + 1 < line.size() && line[i + 1] == '"') {
          cur.push_back('"');
          ++i;
        } else {
          in_quotes = false;
        }
      } else {
        cur.push_back(c);
      }
    } else if (c == '"') {
      in_quotes = true;
    } else if (c == ',') {
      fields.push_back(std::move(cur));
      cur.clear();
    } else {
      cur.push_back(c);
    }
    ++i;
  }
  if (in_quotes) ok = false;
  fields.push_back(std::move(cur));
  return fields;
}

inline std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t')) s.remove_suffix(1);
  return s;
}

inline bool parse_double_field(std::string_view raw, double& out) {
  const std::string_view s = trim(raw);
  if (s.empty()) return false;
  const auto res = std::from_chars(s.data(), s.data() + s.size(), out);
  return res.ec == std::errc{} && res.ptr == s.data() + s.size();
}

inline bool parse_int_field(std::string_view raw, int& out) {
  const std::string_view s = trim(raw);
  if (s.empty()) return false;
  const auto res = std::from_chars(s.data(), s.data() + s.size(), out);
  return res.ec == std::errc{} && res.ptr == s.data() + s.size();
}

/// Strips one trailing '\r' (CRLF input read in text mode on another OS).
inline std::string_view strip_cr(std::string_view line) {
  if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
  return line;
}

}  // namespace detail

// ---------------------------------------------------------------------------
// City database
// ---------------------------------------------------------------------------

inline constexpr std::string_view city_csv_header =
    "city_id,name,country,population_2022,area_sqkm,gdp_per_capita_2022,pop_growth_rate,"
    "gdp_growth_rate";

/// Minimum market size the forecast is meant for; smaller cities load fine
/// but are flagged, since the demand model was not built for them.
inline constexpr double small_city_warning_threshold = 500000.0;

struct CityLoadResult {
  std::vector<CityRecord> records;
  std::vector<std::string> errors;    // any entry means the load failed
  std::vector<std::string> warnings;  // informational only

  bool ok() const { return errors.empty(); }
};

inline CityLoadResult load_city_database(std::istream& in) {
  CityLoadResult out;
  std::string line;
  std::size_t line_no = 0;
  bool header_seen = false;
  std::set<std::string> seen_ids;

  auto err = [&out](std::size_t no, const std::string& msg) {
    out.errors.push_back("line " + std::to_string(no) + ": " + msg);
  };

  while (std::getline(in, line)) {
    ++line_no;
    const std::string_view sv = detail::strip_cr(line);
    if (detail::trim(sv).empty()) continue;

    bool balanced = true;
    std::vector<std::string> fields = detail::split_csv_line(sv, balanced);
    if (!balanced) {
      err(line_no, "unbalanced quote");
      continue;
    }

    if (!header_seen) {
      header_seen = true;
      std::string joined;
      for (std::size_t i = 0; i < fields.size(); ++i) {
        if (i) joined.push_back(',');
        joined += std::string(detail::trim(fields[i]));
      }
      if (joined != city_csv_header) {
        err(line_no, "unexpected header; expected '" + std::string(city_csv_header) + "'");
        return out;
      }
      continue;
    }

    if (fields.size() != 8) {
      err(line_no, "expected 8 fields, got " + std::to_string(fields.size()));
      continue;
    }

    CityRecord rec;
    rec.city_id = std::string(detail::trim(fields[0]));
    rec.name = std::string(detail::trim(fields[1]));
    rec.country = std::string(detail::trim(fields[2]));

    bool numbers_ok = true;
    const std::pair<const char*, double*> numeric_fields[] = {
        {"population_2022", &rec.population_2022},
        {"area_sqkm", &rec.area_sqkm},
        {"gdp_per_capita_2022", &rec.gdp_per_capita_2022},
        {"pop_growth_rate", &rec.pop_growth_rate},
        {"gdp_growth_rate", &rec.gdp_growth_rate},
    };
    for (std::size_t i = 0; i < 5; ++i) {
      if (!detail::parse_double_field(fields[i + 3], *numeric_fields[i].second)) {
        err(line_no, std::string(numeric_fields[i].first) + ": not a number ('" + fields[i + 3] +
                         "')");
        numbers_ok = false;
      }
    }
    if (!numbers_ok) continue;

    bool valid = true;
    if (rec.city_id.empty()) {
      err(line_no, "city_id must not be empty");
      valid = false;
    } else if (!seen_ids.insert(rec.city_id).second) {
      err(line_no, "duplicate city_id '" + rec.city_id + "'");
      valid = false;
    }
    if (!(rec.population_2022 > 0.0)) {
      err(line_no, "population_2022 must be positive");
      valid = false;
    }
    if (!(rec.area_sqkm > 0.0)) {
      err(line_no, "area_sqkm must be positive");
      valid = false;
    }
    if (!(rec.gdp_per_capita_2022 >= 0.0)) {
      err(line_no, "gdp_per_capita_2022 must be non-negative");
      valid = false;
    }
    if (!(rec.pop_growth_rate > -1.0)) {
      err(line_no, "pop_growth_rate must exceed -1");
      valid = false;
    }
    if (!(rec.gdp_growth_rate > -1.0)) {
      err(line_no, "gdp_growth_rate must exceed -1");
      valid = false;
    }
    if (!valid) continue;

    if (rec.population_2022 < small_city_warning_threshold) {
      out.warnings.push_back("line " + std::to_string(line_no) + ": city '" + rec.city_id +
                             "' has population below 500000; the demand model targets larger "
                             "markets");
    }
    out.records.push_back(std::move(rec));
  }

  if (!header_seen) {
    out.errors.push_back("line 1: empty file (missing header)");
  }
  return out;
}

inline CityLoadResult load_city_database(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    CityLoadResult out;
    out.errors.push_back("cannot open '" + path + "'");
    return out;
  }
  return load_city_database(in);
}

inline void write_city_database(std::ostream& os, const std::vector<CityRecord>& records) {
  os << city_csv_header << '\n';
  for (const CityRecord& r : records) {
    os << detail::csv_escape(r.city_id) << ',' << detail::csv_escape(r.name) << ','
       << detail::csv_escape(r.country) << ',' << detail::format_double(r.population_2022) << ','
       << detail::format_double(r.area_sqkm) << ','
       << detail::format_double(r.gdp_per_capita_2022) << ','
       << detail::format_double(r.pop_growth_rate) << ','
       << detail::format_double(r.gdp_growth_rate) << '\n';
  }
}

/// Digest of the canonical re-serialization, so formatting differences in
/// the source file do not change downstream run ids.
inline std::string database_digest(const std::vector<CityRecord>& records) {
  std::ostringstream os;
  write_city_database(os, records);
  return detail::fnv1a64_hex(os.str());
}

// ---------------------------------------------------------------------------
// Growth table (optional per-year growth overrides)
// ---------------------------------------------------------------------------

inline constexpr std::string_view growth_csv_header = "city_id,year,pop_growth,gdp_growth";

struct GrowthLoadResult {
  GrowthTable table;
  std::vector<std::string> errors;

  bool ok() const { return errors.empty(); }
};

/// Loads per-year growth overrides. Either rate field may be left empty to
/// keep the record's constant rate for that year.
inline GrowthLoadResult load_growth_table(std::istream& in) {
  GrowthLoadResult out;
  std::string line;
  std::size_t line_no = 0;
  bool header_seen = false;

  auto err = [&out](std::size_t no, const std::string& msg) {
    out.errors.push_back("line " + std::to_string(no) + ": " + msg);
  };

  while (std::getline(in, line)) {
    ++line_no;
    const std::string_view sv = detail::strip_cr(line);
    if (detail::trim(sv).empty()) continue;

    bool balanced = true;
    std::vector<std::string> fields = detail::split_csv_line(sv, balanced);
    if (!balanced) {
      err(line_no, "unbalanced quote");
      continue;
    }

    if (!header_seen) {
      header_seen = true;
      std::string joined;
      for (std::size_t i = 0; i < fields.size(); ++i) {
        if (i) joined.push_back(',');
        joined += std::string(detail::trim(fields[i]));
      }
      if (joined != growth_csv_header) {
        err(line_no, "unexpected header; expected '" + std::string(growth_csv_header) + "'");
        return out;
      }
      continue;
    }

    if (fields.size() != 4) {
      err(line_no, "expected 4 fields, got " + std::to_string(fields.size()));
      continue;
    }
    const std::string city_id(detail::trim(fields[0]));
    if (city_id.empty()) {
      err(line_no, "city_id must not be empty");
      continue;
    }
    int year = 0;
    if (!detail::parse_int_field(fields[1], year)) {
      err(line_no, "year: not an integer ('" + fields[1] + "')");
      continue;
    }
    if (year <= database_base_year) {
      err(line_no, "year must be after " + std::to_string(database_base_year));
      continue;
    }
    const auto key = std::make_pair(city_id, year);
    for (int i = 0; i < 2; ++i) {
      const std::string_view raw = detail::trim(fields[static_cast<std::size_t>(i) + 2]);
      if (raw.empty()) continue;
      double rate = 0.0;
      if (!detail::parse_double_field(raw, rate)) {
        err(line_no, std::string(i == 0 ? "pop_growth" : "gdp_growth") + ": not a number ('" +
                         std::string(raw) + "')");
        continue;
      }
      if (!(rate > -1.0)) {
        err(line_no, std::string(i == 0 ? "pop_growth" : "gdp_growth") + " must exceed -1");
        continue;
      }
      if (i == 0) {
        out.table.pop_growth[key] = rate;
      } else {
        out.table.gdp_growth[key] = rate;
      }
    }
  }

  if (!header_seen) out.errors.push_back("line 1: empty file (missing header)");
  return out;
}

inline GrowthLoadResult load_growth_table(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    GrowthLoadResult out;
    out.errors.push_back("cannot open '" + path + "'");
    return out;
  }
  return load_growth_table(in);
}

// ---------------------------------------------------------------------------
// Result rows
// ---------------------------------------------------------------------------

inline constexpr std::string_view result_csv_header =
    "run_id,scenario,year,scope,price_eur_km,vd_per_sqkm,daily_trips,daily_movements,"
    "daily_flight_hours,fleet_size,eligible";

inline constexpr std::string_view global_scope = "GLOBAL";
inline constexpr std::string_view no_scenario = "-";

/// One output row. City rows set scope to the city_id, vd_per_sqkm to the
/// density applied to that city, and eligible to 0/1. GLOBAL rows aggregate
/// all cities of the point: vd_per_sqkm is the run-level density lever and
/// eligible counts the eligible cities.
struct ResultRow {
  std::string scenario{no_scenario};
  int year = 0;
  std::string scope;
  double price_eur_km = 0.0;
  double vd_per_sqkm = 0.0;
  double daily_trips = 0.0;
  double daily_movements = 0.0;
  double daily_flight_hours = 0.0;
  double fleet_size = 0.0;
  long long eligible = 0;
};

inline ResultRow to_result_row(const CityResult& c, std::string_view scenario = no_scenario) {
  ResultRow row;
  row.scenario = std::string(scenario);
  row.year = c.year;
  row.scope = c.city_id;
  row.price_eur_km = c.price_eur_km;
  row.vd_per_sqkm = c.vd_city;
  row.daily_trips = c.daily_trips;
  row.daily_movements = c.daily_movements;
  row.daily_flight_hours = c.daily_flight_hours;
  row.fleet_size = c.fleet_size;
  row.eligible = c.eligible ? 1 : 0;
  return row;
}

/// GLOBAL row first, then the point's cities in their stored (ascending
/// city_id) order.
inline std::vector<ResultRow> result_rows(const GlobalResult& g,
                                          std::string_view scenario = no_scenario) {
  std::vector<ResultRow> rows;
  rows.reserve(g.cities.size() + 1);
  ResultRow total;
  total.scenario = std::string(scenario);
  total.year = g.year;
  total.scope = std::string(global_scope);
  total.price_eur_km = g.price_eur_km;
  total.vd_per_sqkm = g.vd_input;
  total.daily_trips = g.totals.daily_trips;
  total.daily_movements = g.totals.daily_movements;
  total.daily_flight_hours = g.totals.daily_flight_hours;
  total.fleet_size = g.totals.fleet_size;
  total.eligible = g.totals.eligible_cities;
  rows.push_back(std::move(total));
  for (const CityResult& c : g.cities) rows.push_back(to_result_row(c, scenario));
  return rows;
}

/// Identity and provenance of one invocation. run_id digests the effective
/// configuration, the canonical database content, and the invocation
/// parameters; nothing time- or host-dependent enters it.
struct RunMeta {
  std::string run_id;
  std::string config_digest;
  bool echo_config = false;
  nlohmann::json config;  // effective configuration; written when echo_config
};

inline RunMeta make_run_meta(const RunConfig& cfg, const std::vector<CityRecord>& records,
                             std::string_view invocation, bool echo_config = false) {
  RunMeta meta;
  meta.config_digest = config_digest(cfg);
  meta.run_id = detail::fnv1a64_hex(meta.config_digest + "|" + database_digest(records) + "|" +
                                    std::string(invocation));
  meta.echo_config = echo_config;
  if (echo_config) meta.config = config_to_json(cfg);
  return meta;
}

namespace detail {

inline void write_meta_preamble(std::ostream& os, const RunMeta& meta) {
  os << "# run_id=" << meta.run_id << " config_digest=" << meta.config_digest << '\n';
  if (meta.echo_config) {
    os << "# config=" << meta.config.dump() << '\n';
  }
}

}  // namespace detail

inline void write_results_csv(std::ostream& os, const RunMeta& meta,
                              const std::vector<ResultRow>& rows) {
  detail::write_meta_preamble(os, meta);
  os << result_csv_header << '\n';
  for (const ResultRow& r : rows) {
    os << meta.run_id << ',' << detail::csv_escape(r.scenario) << ',' << r.year << ','
       << detail::csv_escape(r.scope) << ',' << detail::format_double(r.price_eur_km) << ','
       << detail::format_double(r.vd_per_sqkm) << ',' << detail::format_double(r.daily_trips)
       << ',' << detail::format_double(r.daily_movements) << ','
       << detail::format_double(r.daily_flight_hours) << ','
       << detail::format_double(r.fleet_size) << ',' << r.eligible << '\n';
  }
}

inline void write_results_json(std::ostream& os, const RunMeta& meta,
                               const std::vector<ResultRow>& rows) {
  nlohmann::json doc;
  doc["run_id"] = meta.run_id;
  doc["config_digest"] = meta.config_digest;
  if (meta.echo_config) doc["config"] = meta.config;
  nlohmann::json out_rows = nlohmann::json::array();
  for (const ResultRow& r : rows) {
    nlohmann::json jr;
    jr["scenario"] = r.scenario;
    jr["year"] = r.year;
    jr["scope"] = r.scope;
    jr["price_eur_km"] = r.price_eur_km;
    jr["vd_per_sqkm"] = r.vd_per_sqkm;
    jr["daily_trips"] = r.daily_trips;
    jr["daily_movements"] = r.daily_movements;
    jr["daily_flight_hours"] = r.daily_flight_hours;
    jr["fleet_size"] = r.fleet_size;
    jr["eligible"] = r.eligible;
    out_rows.push_back(std::move(jr));
  }
  doc["rows"] = std::move(out_rows);
  os << doc.dump(2) << '\n';
}

// ---------------------------------------------------------------------------
// Sensitivity grid (price rows x density columns of global daily trips)
// ---------------------------------------------------------------------------

inline void write_sweep_grid_csv(std::ostream& os, const RunMeta& meta, const SweepResult& sweep) {
  detail::write_meta_preamble(os, meta);
  os << "price_eur_km";
  for (double d : sweep.densities) os << ',' << detail::format_double(d);
  os << '\n';
  for (std::size_t pi = 0; pi < sweep.prices.size(); ++pi) {
    os << detail::format_double(sweep.prices[pi]);
    for (std::size_t di = 0; di < sweep.densities.size(); ++di) {
      os << ',' << detail::format_double(sweep.point(pi, di).totals.daily_trips);
    }
    os << '\n';
  }
}

inline void write_sweep_grid_json(std::ostream& os, const RunMeta& meta, const SweepResult& sweep) {
  nlohmann::json doc;
  doc["run_id"] = meta.run_id;
  doc["config_digest"] = meta.config_digest;
  if (meta.echo_config) doc["config"] = meta.config;
  doc["year"] = sweep.year;
  doc["prices"] = sweep.prices;
  doc["densities"] = sweep.densities;
  nlohmann::json grid = nlohmann::json::array();
  for (std::size_t pi = 0; pi < sweep.prices.size(); ++pi) {
    nlohmann::json row = nlohmann::json::array();
    for (std::size_t di = 0; di < sweep.densities.size(); ++di) {
      row.push_back(sweep.point(pi, di).totals.daily_trips);
    }
    grid.push_back(std::move(row));
  }
  doc["daily_trips"] = std::move(grid);
  os << doc.dump(2) << '\n';
}

// ---------------------------------------------------------------------------
// Trip matrix export
// ---------------------------------------------------------------------------

/// Dumps every OD cell pair with a positive trip volume, origins and
/// destinations in grid order. Zero rows are omitted; with the default trip
/// law that only drops pairs beyond its 100 km saturation point.
inline void write_od_matrix_csv(std::ostream& os, const ODMatrix& od) {
  os << "origin_ix,origin_iy,dest_ix,dest_iy,trips_per_day\n";
  const auto& cells = od.grid().cells();
  for (std::size_t o = 0; o < od.size(); ++o) {
    od.for_each_destination(o, [&](std::size_t dest, double trips) {
      if (trips <= 0.0) return;
      os << cells[o].ix << ',' << cells[o].iy << ',' << cells[dest].ix << ',' << cells[dest].iy
         << ',' << detail::format_double(trips) << '\n';
    });
  }
}

}  // namespace uamcast
