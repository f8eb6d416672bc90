#include <catch2/catch_amalgamated.hpp>

#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

namespace {

namespace fs = std::filesystem;

const fs::path scratch_dir = "cli_scratch";
const std::string cli = UAMCAST_CLI_PATH;
const std::string fixture = std::string(UAMCAST_DATA_DIR) + "/cities_sample.csv";

struct CliRun {
  int exit_code = -1;
  std::string out;
  std::string err;
};

std::string read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  REQUIRE(in.good());
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void write_file(const fs::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  REQUIRE(out.good());
  out << content;
}

std::vector<std::string> lines_of(const std::string& text) {
  std::vector<std::string> lines;
  std::string cur;
  for (char c : text) {
    if (c == '\n') {
      lines.push_back(cur);
      cur.clear();
    } else {
      cur.push_back(c);
    }
  }
  if (!cur.empty()) lines.push_back(cur);
  return lines;
}

CliRun run_cli(const std::string& args) {
  fs::create_directories(scratch_dir);
  const fs::path out_path = scratch_dir / "stdout.txt";
  const fs::path err_path = scratch_dir / "stderr.txt";
  const std::string command = "\"" + cli + "\" " + args + " > \"" + out_path.string() +
                              "\" 2> \"" + err_path.string() + "\"";
  const int status = std::system(command.c_str());
  CliRun result;
  REQUIRE(status != -1);
  REQUIRE(WIFEXITED(status));
  result.exit_code = WEXITSTATUS(status);
  result.out = read_file(out_path);
  result.err = read_file(err_path);
  return result;
}

}  // namespace

TEST_CASE("cli: --help exits cleanly") {
  const CliRun r = run_cli("--help");
  REQUIRE(r.exit_code == 0);
  REQUIRE(r.out.find("forecaster") != std::string::npos);
}

TEST_CASE("cli: missing subcommand and unknown flags are usage errors") {
  REQUIRE(run_cli("").exit_code == 2);
  REQUIRE(run_cli("validate --cities " + fixture + " --frobnicate").exit_code == 2);
  REQUIRE(run_cli("teleport --cities " + fixture).exit_code == 2);
}

TEST_CASE("cli: validate reports the bundled database as clean") {
  const CliRun r = run_cli("validate --cities " + fixture);
  REQUIRE(r.exit_code == 0);
  REQUIRE(r.out.find("status=ok") != std::string::npos);
  REQUIRE(r.out.find("cities=20") != std::string::npos);
  REQUIRE(r.out.find("warnings=0") != std::string::npos);
}

TEST_CASE("cli: validate emits json when asked") {
  const CliRun r = run_cli("validate --cities " + fixture + " --format json --seed-echo");
  REQUIRE(r.exit_code == 0);
  const nlohmann::json doc = nlohmann::json::parse(r.out);
  REQUIRE(doc.at("status") == "ok");
  REQUIRE(doc.at("cities") == 20);
  REQUIRE(doc.contains("config"));
  REQUIRE(doc.at("config").contains("fleet"));
}

TEST_CASE("cli: validate rejects a database with duplicate ids") {
  const fs::path bad = scratch_dir / "dup.csv";
  fs::create_directories(scratch_dir);
  write_file(bad,
             "city_id,name,country,population_2022,area_sqkm,gdp_per_capita_2022,"
             "pop_growth_rate,gdp_growth_rate\n"
             "x1,Alpha,Land,1000000,100,30000,0.01,0.02\n"
             "x1,Beta,Land,2000000,200,40000,0.01,0.02\n");
  const CliRun r = run_cli("validate --cities " + bad.string());
  REQUIRE(r.exit_code == 1);
  REQUIRE(r.err.find("duplicate city_id 'x1'") != std::string::npos);
}

TEST_CASE("cli: run-city forecasts one city and prints a summary") {
  const fs::path out = scratch_dir / "run_city.csv";
  const CliRun r = run_cli("run-city --cities " + fixture +
                           " --city c03 --year 2030 --price 4.0 --vd 0.02 --out " + out.string());
  REQUIRE(r.exit_code == 0);
  REQUIRE(r.err.find("c03 2030:") != std::string::npos);
  REQUIRE(r.err.find("fleet=") != std::string::npos);
  REQUIRE(r.err.find("vertiports=") != std::string::npos);

  const std::vector<std::string> lines = lines_of(read_file(out));
  REQUIRE(lines.size() == 3);
  REQUIRE(lines[0].rfind("# run_id=", 0) == 0);
  REQUIRE(lines[1] ==
          "run_id,scenario,year,scope,price_eur_km,vd_per_sqkm,daily_trips,daily_movements,"
          "daily_flight_hours,fleet_size,eligible");
  REQUIRE(lines[2].find(",-,2030,c03,4,") != std::string::npos);
}

TEST_CASE("cli: run-city can dump the trip matrix") {
  const fs::path od = scratch_dir / "od.csv";
  const CliRun r = run_cli("run-city --cities " + fixture +
                           " --city c04 --year 2030 --price 4.0 --vd 0.02 --out " +
                           (scratch_dir / "ignored.csv").string() + " --dump-od " + od.string());
  REQUIRE(r.exit_code == 0);
  const std::vector<std::string> lines = lines_of(read_file(od));
  REQUIRE(lines.size() > 1);
  REQUIRE(lines[0] == "origin_ix,origin_iy,dest_ix,dest_iy,trips_per_day");
}

TEST_CASE("cli: run-city rejects bad cities, years, and prices") {
  REQUIRE(run_cli("run-city --cities " + fixture +
                  " --city nope --year 2030 --price 4 --vd 0.02").exit_code == 1);
  REQUIRE(run_cli("run-city --cities " + fixture +
                  " --city c01 --year 2010 --price 4 --vd 0.02").exit_code == 2);
  REQUIRE(run_cli("run-city --cities " + fixture +
                  " --city c01 --year 2030 --price -1 --vd 0.02").exit_code == 2);
}

TEST_CASE("cli: missing city database is a data error") {
  const CliRun r = run_cli("validate --cities " + (scratch_dir / "no_such.csv").string());
  REQUIRE(r.exit_code == 1);
}

TEST_CASE("cli: config problems are data errors") {
  fs::create_directories(scratch_dir);
  const fs::path out_of_range = scratch_dir / "bad_range.json";
  write_file(out_of_range, "{\"choice\": {\"gc_coefficient\": 0.1}}");
  REQUIRE(run_cli("validate --cities " + fixture + " --config " + out_of_range.string())
              .exit_code == 1);

  const fs::path unknown_key = scratch_dir / "bad_key.json";
  write_file(unknown_key, "{\"fleet\": {\"seats\": 4}}");
  REQUIRE(run_cli("validate --cities " + fixture + " --config " + unknown_key.string())
              .exit_code == 1);

  const fs::path malformed = scratch_dir / "bad_syntax.json";
  write_file(malformed, "{\"fleet\": ");
  REQUIRE(run_cli("validate --cities " + fixture + " --config " + malformed.string())
              .exit_code == 1);
}

TEST_CASE("cli: sweep writes the demand grid and optional per-city rows") {
  const fs::path grid = scratch_dir / "grid.csv";
  const fs::path rows = scratch_dir / "rows.csv";
  const CliRun r = run_cli("sweep --cities " + fixture +
                           " --year 2030 --prices 3,6 --densities 0.01 --rows-out " +
                           rows.string() + " --out " + grid.string());
  REQUIRE(r.exit_code == 0);

  const std::vector<std::string> grid_lines = lines_of(read_file(grid));
  REQUIRE(grid_lines.size() == 4);
  REQUIRE(grid_lines[0].rfind("# run_id=", 0) == 0);
  REQUIRE(grid_lines[1] == "price_eur_km,0.01");
  REQUIRE(grid_lines[2].rfind("3,", 0) == 0);
  REQUIRE(grid_lines[3].rfind("6,", 0) == 0);

  const std::vector<std::string> row_lines = lines_of(read_file(rows));
  // preamble + header + 2 points x (GLOBAL + 20 cities)
  REQUIRE(row_lines.size() == 2 + 2 * 21);
  REQUIRE(row_lines[2].find(",-,2030,GLOBAL,3,0.01,") != std::string::npos);
}

TEST_CASE("cli: sweep rejects malformed lever lists") {
  REQUIRE(run_cli("sweep --cities " + fixture + " --year 2030 --prices 3:2:1").exit_code == 2);
  REQUIRE(run_cli("sweep --cities " + fixture + " --year 2030 --prices 3,,4").exit_code == 2);
  REQUIRE(run_cli("sweep --cities " + fixture + " --year 2030 --prices abc").exit_code == 2);
  REQUIRE(run_cli("sweep --cities " + fixture + " --year 2030 --densities 0.01:-0.02:0.01")
              .exit_code == 2);
}

TEST_CASE("cli: scenario emits GLOBAL and per-city rows for each year") {
  const fs::path out = scratch_dir / "scenario.csv";
  const CliRun r = run_cli("scenario --cities " + fixture +
                           " --name S1 --years 2030,2050 --out " + out.string());
  REQUIRE(r.exit_code == 0);

  const std::vector<std::string> lines = lines_of(read_file(out));
  REQUIRE(lines.size() == 2 + 2 * 21);
  REQUIRE(lines[2].find(",S1,2030,GLOBAL,4.1,0.002,") != std::string::npos);
  REQUIRE(lines[3].find(",S1,2030,c01,") != std::string::npos);
  REQUIRE(lines[23].find(",S1,2050,GLOBAL,") != std::string::npos);
}

TEST_CASE("cli: scenario rejects unknown names and out-of-window years") {
  REQUIRE(run_cli("scenario --cities " + fixture + " --name S9").exit_code == 2);
  REQUIRE(run_cli("scenario --cities " + fixture + " --name S1 --years 2010,2030")
              .exit_code == 2);
  REQUIRE(run_cli("scenario --cities " + fixture + " --name S1 --years 2055").exit_code == 2);
}

TEST_CASE("cli: seed-echo embeds the configuration in the preamble") {
  const fs::path out = scratch_dir / "echo.csv";
  const CliRun r = run_cli("run-city --cities " + fixture +
                           " --city c03 --year 2030 --price 4.0 --vd 0.02 --seed-echo --out " +
                           out.string());
  REQUIRE(r.exit_code == 0);
  const std::vector<std::string> lines = lines_of(read_file(out));
  REQUIRE(lines.size() == 4);
  REQUIRE(lines[1].rfind("# config=", 0) == 0);
  const nlohmann::json echoed = nlohmann::json::parse(lines[1].substr(9));
  REQUIRE(echoed.contains("choice"));
}

TEST_CASE("cli: json output carries the same rows as csv") {
  const CliRun r = run_cli("run-city --cities " + fixture +
                           " --city c03 --year 2030 --price 4.0 --vd 0.02 --format json");
  REQUIRE(r.exit_code == 0);
  const nlohmann::json doc = nlohmann::json::parse(r.out);
  REQUIRE(doc.at("rows").size() == 1);
  REQUIRE(doc.at("rows")[0].at("scope") == "c03");
  REQUIRE(doc.at("rows")[0].at("year") == 2030);
  REQUIRE(doc.contains("run_id"));
}

TEST_CASE("cli: growth table overrides feed the forecast") {
  const fs::path growth = scratch_dir / "growth.csv";
  fs::create_directories(scratch_dir);
  // Freeze c03 entirely for every year up to 2030.
  std::string body = "city_id,year,pop_growth,gdp_growth\n";
  for (int year = 2023; year <= 2030; ++year) {
    body += "c03," + std::to_string(year) + ",0,0\n";
  }
  write_file(growth, body);

  const CliRun frozen = run_cli("run-city --cities " + fixture +
                                " --city c03 --year 2030 --price 4.0 --vd 0.02 --format json"
                                " --growth " + growth.string());
  const CliRun grown = run_cli("run-city --cities " + fixture +
                               " --city c03 --year 2030 --price 4.0 --vd 0.02 --format json");
  REQUIRE(frozen.exit_code == 0);
  REQUIRE(grown.exit_code == 0);
  const double frozen_trips =
      nlohmann::json::parse(frozen.out).at("rows")[0].at("daily_trips").get<double>();
  const double grown_trips =
      nlohmann::json::parse(grown.out).at("rows")[0].at("daily_trips").get<double>();
  // Freezing population and GDP growth removes demand the default rates add.
  REQUIRE(frozen_trips < grown_trips);
}

TEST_CASE("cli: thread count never changes the output bytes") {
  const fs::path one = scratch_dir / "threads1.csv";
  const fs::path four = scratch_dir / "threads4.csv";
  const std::string base = "scenario --cities " + fixture + " --name S2 --years 2030";
  REQUIRE(run_cli(base + " --threads 1 --out " + one.string()).exit_code == 0);
  REQUIRE(run_cli(base + " --threads 4 --out " + four.string()).exit_code == 0);
  const std::string a = read_file(one);
  const std::string b = read_file(four);
  REQUIRE(!a.empty());
  REQUIRE(a == b);
}
