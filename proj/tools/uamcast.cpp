// Command-line front end for the air taxi demand forecaster.
//
// Exit codes: 0 success, 1 data errors (unreadable or invalid inputs,
// failed computations), 2 usage errors (bad flags, malformed lists,
// out-of-window years).

#include <algorithm>
#include <cmath>
#include <exception>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "uamcast/uamcast.hpp"

namespace {

constexpr int exit_ok = 0;
constexpr int exit_data_error = 1;
constexpr int exit_usage_error = 2;

/// Thrown for malformed value lists and other argument-level problems that
/// CLI11 cannot catch itself; mapped to exit code 2.
class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class DataError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> parts;
  std::string cur;
  for (char c : s) {
    if (c == sep) {
      parts.push_back(cur);
      cur.clear();
    } else {
      cur.push_back(c);
    }
  }
  parts.push_back(cur);
  return parts;
}

double parse_double_or_throw(const std::string& s, const std::string& what) {
  try {
    std::size_t pos = 0;
    const double v = std::stod(s, &pos);
    if (pos != s.size() || !std::isfinite(v)) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    throw UsageError(what + ": '" + s + "' is not a number");
  }
}

int parse_int_or_throw(const std::string& s, const std::string& what) {
  try {
    std::size_t pos = 0;
    const int v = std::stoi(s, &pos);
    if (pos != s.size()) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    throw UsageError(what + ": '" + s + "' is not an integer");
  }
}

/// Accepts "start:stop:step" (inclusive, step > 0) or "a,b,c".
std::vector<double> parse_value_list(const std::string& text, const std::string& what) {
  std::vector<double> values;
  if (text.find(':') != std::string::npos) {
    const auto parts = split(text, ':');
    if (parts.size() != 3) {
      throw UsageError(what + ": range form must be start:stop:step");
    }
    const double start = parse_double_or_throw(parts[0], what);
    const double stop = parse_double_or_throw(parts[1], what);
    const double step = parse_double_or_throw(parts[2], what);
    if (!(step > 0.0)) throw UsageError(what + ": step must be positive");
    if (stop < start) throw UsageError(what + ": stop must not precede start");
    const double tol = step * 1e-9;
    for (int k = 0;; ++k) {
      const double v = start + k * step;
      if (v > stop + tol) break;
      values.push_back(v);
    }
  } else {
    for (const std::string& part : split(text, ',')) {
      if (part.empty()) throw UsageError(what + ": empty element in list");
      values.push_back(parse_double_or_throw(part, what));
    }
  }
  if (values.empty()) throw UsageError(what + ": no values");
  for (double v : values) {
    if (v < 0.0) throw UsageError(what + ": values must be non-negative");
  }
  return values;
}

std::vector<int> parse_year_list(const std::string& text, const std::string& what) {
  std::vector<int> years;
  if (text.find(':') != std::string::npos) {
    const auto parts = split(text, ':');
    if (parts.size() != 3) {
      throw UsageError(what + ": range form must be start:stop:step");
    }
    const int start = parse_int_or_throw(parts[0], what);
    const int stop = parse_int_or_throw(parts[1], what);
    const int step = parse_int_or_throw(parts[2], what);
    if (step <= 0) throw UsageError(what + ": step must be positive");
    if (stop < start) throw UsageError(what + ": stop must not precede start");
    for (int y = start; y <= stop; y += step) years.push_back(y);
  } else {
    for (const std::string& part : split(text, ',')) {
      if (part.empty()) throw UsageError(what + ": empty element in list");
      years.push_back(parse_int_or_throw(part, what));
    }
  }
  if (years.empty()) throw UsageError(what + ": no values");
  return years;
}

std::string join_doubles(const std::vector<double>& values) {
  std::string out;
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (i) out.push_back(',');
    out += uamcast::detail::format_double(values[i]);
  }
  return out;
}

std::string join_ints(const std::vector<int>& values) {
  std::string out;
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (i) out.push_back(',');
    out += std::to_string(values[i]);
  }
  return out;
}

struct CommonOpts {
  std::string cities_path;
  std::string config_path;
  std::string growth_path;
  std::string out_path;  // empty writes to stdout
  std::string format = "csv";
  unsigned threads = 0;
  bool seed_echo = false;
};

void add_common_options(CLI::App* cmd, CommonOpts& opts) {
  cmd->add_option("--cities", opts.cities_path, "City database CSV")->required();
  cmd->add_option("--config", opts.config_path, "JSON configuration file");
  cmd->add_option("--growth", opts.growth_path, "Per-year growth override CSV");
  cmd->add_option("--out", opts.out_path, "Output file (default: stdout)");
  cmd->add_option("--format", opts.format, "Output format")
      ->check(CLI::IsMember({"csv", "json"}))
      ->capture_default_str();
  cmd->add_option("--threads", opts.threads, "Worker threads (0 = all cores)")
      ->capture_default_str();
  cmd->add_flag("--seed-echo", opts.seed_echo,
                "Embed the effective configuration in the output");
}

struct LoadedInputs {
  uamcast::RunConfig config;
  std::vector<uamcast::CityRecord> records;
  uamcast::GrowthTable growth;
  std::string growth_digest = "-";
  std::vector<std::string> warnings;
};

LoadedInputs load_inputs(const CommonOpts& opts) {
  LoadedInputs in;
  if (!opts.config_path.empty()) {
    in.config = uamcast::load_config(opts.config_path);  // ConfigError on failure
  }

  uamcast::CityLoadResult cities = uamcast::load_city_database(opts.cities_path);
  if (!cities.ok()) {
    std::string msg = "city database '" + opts.cities_path + "' has errors:";
    for (const std::string& e : cities.errors) msg += "\n  " + e;
    throw DataError(msg);
  }
  if (cities.records.empty()) {
    throw DataError("city database '" + opts.cities_path + "' contains no cities");
  }
  in.records = std::move(cities.records);
  in.warnings = std::move(cities.warnings);

  if (!opts.growth_path.empty()) {
    uamcast::GrowthLoadResult growth = uamcast::load_growth_table(opts.growth_path);
    if (!growth.ok()) {
      std::string msg = "growth table '" + opts.growth_path + "' has errors:";
      for (const std::string& e : growth.errors) msg += "\n  " + e;
      throw DataError(msg);
    }
    in.growth = std::move(growth.table);
    std::string blob;
    for (const auto& [key, rate] : in.growth.pop_growth) {
      blob += "P|" + key.first + "|" + std::to_string(key.second) + "|" +
              uamcast::detail::format_double(rate) + ";";
    }
    for (const auto& [key, rate] : in.growth.gdp_growth) {
      blob += "G|" + key.first + "|" + std::to_string(key.second) + "|" +
              uamcast::detail::format_double(rate) + ";";
    }
    in.growth_digest = uamcast::detail::fnv1a64_hex(blob);
  }
  return in;
}

/// Runs fn against --out (or stdout). Files are opened in binary mode so the
/// bytes written are exactly the bytes on disk.
template <typename Fn>
void with_output(const std::string& out_path, Fn&& fn) {
  if (out_path.empty()) {
    fn(std::cout);
    std::cout.flush();
    return;
  }
  std::ofstream out(out_path, std::ios::binary);
  if (!out) throw DataError("cannot open output file '" + out_path + "'");
  fn(out);
  if (!out) throw DataError("failed writing output file '" + out_path + "'");
}

void print_warnings(const std::vector<std::string>& warnings) {
  for (const std::string& w : warnings) std::cerr << "warning: " << w << '\n';
}

// ---------------------------------------------------------------------------
// validate
// ---------------------------------------------------------------------------

struct ValidateOpts {
  CommonOpts common;
};

int cmd_validate(const ValidateOpts& opts) {
  const LoadedInputs in = load_inputs(opts.common);
  const std::string digest = uamcast::config_digest(in.config);
  const std::size_t growth_entries = in.growth.pop_growth.size() + in.growth.gdp_growth.size();

  with_output(opts.common.out_path, [&](std::ostream& os) {
    if (opts.common.format == "json") {
      nlohmann::json doc;
      doc["status"] = "ok";
      doc["config_digest"] = digest;
      doc["cities"] = in.records.size();
      doc["growth_entries"] = growth_entries;
      doc["warnings"] = in.warnings;
      if (opts.common.seed_echo) doc["config"] = uamcast::config_to_json(in.config);
      os << doc.dump(2) << '\n';
    } else {
      os << "status=ok\n";
      os << "config_digest=" << digest << '\n';
      os << "cities=" << in.records.size() << '\n';
      os << "growth_entries=" << growth_entries << '\n';
      os << "warnings=" << in.warnings.size() << '\n';
      for (const std::string& w : in.warnings) os << "warning: " << w << '\n';
      if (opts.common.seed_echo) {
        os << "config=" << uamcast::config_to_json(in.config).dump() << '\n';
      }
    }
  });
  return exit_ok;
}

// ---------------------------------------------------------------------------
// run-city
// ---------------------------------------------------------------------------

struct RunCityOpts {
  CommonOpts common;
  std::string city_id;
  int year = 2030;
  double price = 0.0;
  double vd = 0.0;
  std::string dump_od_path;
};

int cmd_run_city(const RunCityOpts& opts) {
  if (opts.year < uamcast::database_base_year) {
    throw UsageError("--year must be " + std::to_string(uamcast::database_base_year) +
                     " or later");
  }
  const LoadedInputs in = load_inputs(opts.common);
  print_warnings(in.warnings);

  const auto it = std::find_if(in.records.begin(), in.records.end(),
                               [&](const uamcast::CityRecord& r) {
                                 return r.city_id == opts.city_id;
                               });
  if (it == in.records.end()) {
    throw DataError("unknown city '" + opts.city_id + "' in '" + opts.common.cities_path + "'");
  }

  const uamcast::CityWorkspace ws = uamcast::make_workspace(*it, opts.year, in.config, in.growth);
  const double vd_city =
      uamcast::resolve_city_density(opts.vd, in.config.density_input, it->area_sqkm,
                                    ws.projected().gdp_per_capita, in.config.density);
  const uamcast::CityResult result = uamcast::evaluate_city(ws, opts.price, vd_city, in.config);

  if (!opts.dump_od_path.empty()) {
    std::ofstream od_out(opts.dump_od_path, std::ios::binary);
    if (!od_out) throw DataError("cannot open OD dump file '" + opts.dump_od_path + "'");
    uamcast::write_od_matrix_csv(od_out, ws.od());
  }

  const std::string invocation =
      "run-city|city=" + opts.city_id + "|year=" + std::to_string(opts.year) +
      "|price=" + uamcast::detail::format_double(opts.price) +
      "|vd=" + uamcast::detail::format_double(opts.vd) + "|growth=" + in.growth_digest;
  const uamcast::RunMeta meta =
      uamcast::make_run_meta(in.config, in.records, invocation, opts.common.seed_echo);

  const std::vector<uamcast::ResultRow> rows = {uamcast::to_result_row(result)};
  with_output(opts.common.out_path, [&](std::ostream& os) {
    if (opts.common.format == "json") {
      uamcast::write_results_json(os, meta, rows);
    } else {
      uamcast::write_results_csv(os, meta, rows);
    }
  });

  std::cerr << result.city_id << " " << result.year << ": trips/day="
            << uamcast::detail::format_double(result.daily_trips)
            << " movements/day=" << uamcast::detail::format_double(result.daily_movements)
            << " flight_h/day=" << uamcast::detail::format_double(result.daily_flight_hours)
            << " fleet=" << uamcast::detail::format_double(result.fleet_size) << " (ceil "
            << result.fleet_size_ceil() << ")"
            << " vertiports=" << result.vertiport_count
            << " eligible=" << (result.eligible ? "yes" : "no") << '\n';
  return exit_ok;
}

// ---------------------------------------------------------------------------
// sweep
// ---------------------------------------------------------------------------

struct SweepOpts {
  CommonOpts common;
  int year = 2030;
  std::string prices_text = "2.5:6.0:0.5";
  std::string densities_text = "0.01,0.02,0.04";
  std::string rows_out_path;
};

int cmd_sweep(const SweepOpts& opts) {
  if (opts.year < uamcast::database_base_year) {
    throw UsageError("--year must be " + std::to_string(uamcast::database_base_year) +
                     " or later");
  }
  const std::vector<double> prices = parse_value_list(opts.prices_text, "--prices");
  const std::vector<double> densities = parse_value_list(opts.densities_text, "--densities");

  const LoadedInputs in = load_inputs(opts.common);
  print_warnings(in.warnings);

  const uamcast::SweepResult sweep = uamcast::run_sweep(in.records, opts.year, prices, densities,
                                                        in.config, in.growth,
                                                        opts.common.threads);

  const std::string invocation = "sweep|year=" + std::to_string(opts.year) +
                                 "|prices=" + join_doubles(prices) +
                                 "|densities=" + join_doubles(densities) +
                                 "|growth=" + in.growth_digest;
  const uamcast::RunMeta meta =
      uamcast::make_run_meta(in.config, in.records, invocation, opts.common.seed_echo);

  with_output(opts.common.out_path, [&](std::ostream& os) {
    if (opts.common.format == "json") {
      uamcast::write_sweep_grid_json(os, meta, sweep);
    } else {
      uamcast::write_sweep_grid_csv(os, meta, sweep);
    }
  });

  if (!opts.rows_out_path.empty()) {
    std::vector<uamcast::ResultRow> rows;
    for (const uamcast::GlobalResult& point : sweep.points) {
      for (uamcast::ResultRow& row : uamcast::result_rows(point)) {
        rows.push_back(std::move(row));
      }
    }
    std::ofstream rows_out(opts.rows_out_path, std::ios::binary);
    if (!rows_out) throw DataError("cannot open rows file '" + opts.rows_out_path + "'");
    if (opts.common.format == "json") {
      uamcast::write_results_json(rows_out, meta, rows);
    } else {
      uamcast::write_results_csv(rows_out, meta, rows);
    }
  }
  return exit_ok;
}

// ---------------------------------------------------------------------------
// scenario
// ---------------------------------------------------------------------------

struct ScenarioOpts {
  CommonOpts common;
  std::string name;
  std::string years_text = "2030:2050:5";
};

int cmd_scenario(const ScenarioOpts& opts) {
  const std::vector<int> years = parse_year_list(opts.years_text, "--years");
  for (int y : years) {
    if (y < uamcast::market_first_year || y > uamcast::market_last_year) {
      throw UsageError("--years must lie within [" + std::to_string(uamcast::market_first_year) +
                       ", " + std::to_string(uamcast::market_last_year) + "]");
    }
  }
  const uamcast::ScenarioSpec spec = uamcast::scenario_by_name(opts.name);

  const LoadedInputs in = load_inputs(opts.common);
  print_warnings(in.warnings);

  const uamcast::ScenarioRun run =
      uamcast::run_scenario(in.records, spec, years, in.config, in.growth, opts.common.threads);

  const std::string invocation = "scenario|name=" + spec.name + "|years=" + join_ints(years) +
                                 "|growth=" + in.growth_digest;
  const uamcast::RunMeta meta =
      uamcast::make_run_meta(in.config, in.records, invocation, opts.common.seed_echo);

  std::vector<uamcast::ResultRow> rows;
  for (const uamcast::GlobalResult& year_result : run.years) {
    for (uamcast::ResultRow& row : uamcast::result_rows(year_result, spec.name)) {
      rows.push_back(std::move(row));
    }
  }
  with_output(opts.common.out_path, [&](std::ostream& os) {
    if (opts.common.format == "json") {
      uamcast::write_results_json(os, meta, rows);
    } else {
      uamcast::write_results_csv(os, meta, rows);
    }
  });
  return exit_ok;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"City-by-city air taxi demand, movement, and fleet forecaster"};
  app.require_subcommand(1);

  ValidateOpts validate_opts;
  CLI::App* validate_cmd =
      app.add_subcommand("validate", "Check a city database and configuration");
  add_common_options(validate_cmd, validate_opts.common);

  RunCityOpts run_city_opts;
  CLI::App* run_city_cmd =
      app.add_subcommand("run-city", "Forecast one city at a given price and density");
  add_common_options(run_city_cmd, run_city_opts.common);
  run_city_cmd->add_option("--city", run_city_opts.city_id, "City id to evaluate")->required();
  run_city_cmd->add_option("--year", run_city_opts.year, "Forecast year")->required();
  run_city_cmd->add_option("--price", run_city_opts.price, "Ticket price in EUR per flown km")
      ->check(CLI::NonNegativeNumber)
      ->required();
  run_city_cmd
      ->add_option("--vd", run_city_opts.vd,
                   "Vertiport density lever (per-city or reference, per configuration)")
      ->check(CLI::NonNegativeNumber)
      ->required();
  run_city_cmd->add_option("--dump-od", run_city_opts.dump_od_path,
                           "Write the city's trip matrix to this CSV file");

  SweepOpts sweep_opts;
  CLI::App* sweep_cmd =
      app.add_subcommand("sweep", "Price x density sensitivity grid over all cities");
  add_common_options(sweep_cmd, sweep_opts.common);
  sweep_cmd->add_option("--year", sweep_opts.year, "Forecast year")->required();
  sweep_cmd->add_option("--prices", sweep_opts.prices_text, "Prices: start:stop:step or a,b,c")
      ->capture_default_str();
  sweep_cmd
      ->add_option("--densities", sweep_opts.densities_text,
                   "Density levers: start:stop:step or a,b,c")
      ->capture_default_str();
  sweep_cmd->add_option("--rows-out", sweep_opts.rows_out_path,
                        "Also write per-city result rows to this file");

  ScenarioOpts scenario_opts;
  CLI::App* scenario_cmd =
      app.add_subcommand("scenario", "Market scenario over the 2030-2050 window");
  add_common_options(scenario_cmd, scenario_opts.common);
  scenario_cmd->add_option("--name", scenario_opts.name, "Scenario name")
      ->check(CLI::IsMember({"S1", "S2", "S3", "S4"}))
      ->required();
  scenario_cmd->add_option("--years", scenario_opts.years_text, "Years: start:stop:step or a,b,c")
      ->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? exit_ok : exit_usage_error;
  }

  try {
    if (validate_cmd->parsed()) return cmd_validate(validate_opts);
    if (run_city_cmd->parsed()) return cmd_run_city(run_city_opts);
    if (sweep_cmd->parsed()) return cmd_sweep(sweep_opts);
    if (scenario_cmd->parsed()) return cmd_scenario(scenario_opts);
    std::cerr << "error: no subcommand\n";
    return exit_usage_error;
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return exit_usage_error;
  } catch (const DataError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return exit_data_error;
  } catch (const uamcast::ConfigError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return exit_data_error;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return exit_data_error;
  }
}
