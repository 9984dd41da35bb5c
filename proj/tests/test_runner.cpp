#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include "isac_fbl/runner.hpp"
#include "isac_fbl/tradeoff_bounds.hpp"
#include "isac_fbl/version.hpp"

using namespace isac_fbl;

namespace {

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  REQUIRE_MESSAGE(bool(in), "missing output file " << path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

struct Csv {
  std::vector<std::string> metadata;  // '#' lines
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;
};

std::vector<std::string> split(const std::string& line) {
  std::vector<std::string> out;
  std::string field;
  std::istringstream in(line);
  while (std::getline(in, field, ',')) out.push_back(field);
  return out;
}

Csv parse_csv(const std::string& text) {
  Csv csv;
  std::istringstream in(text);
  std::string line;
  bool have_header = false;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    if (line[0] == '#') {
      csv.metadata.push_back(line);
    } else if (!have_header) {
      csv.header = split(line);
      have_header = true;
    } else {
      csv.rows.push_back(split(line));
    }
  }
  return csv;
}

struct TempFile {
  std::string path;
  explicit TempFile(std::string p) : path(std::move(p)) {}
  ~TempFile() { std::remove(path.c_str()); }
};

}  // namespace

TEST_CASE("default user placement spans the scene deterministically") {
  const std::vector<UserState> states = default_user_states(16);
  REQUIRE(states.size() == 16);
  const double limit = 60.0 * std::numbers::pi / 180.0;
  for (std::size_t i = 0; i < states.size(); ++i) {
    CHECK(std::abs(states[i].theta) < limit);
    if (i > 0) CHECK(states[i].theta > states[i - 1].theta);
    CHECK(states[i].beta == std::complex<double>(1.0, 0.0));
  }
  CHECK(states.front().range == 20.0);
  CHECK(states.back().range == 200.0);
  CHECK(states.front().velocity == -30.0);
  CHECK(states.back().velocity == 30.0);

  const std::vector<UserState> solo = default_user_states(1);
  CHECK(solo[0].theta == 0.0);
  CHECK(solo[0].range == 110.0);
  CHECK(solo[0].velocity == 0.0);
}

TEST_CASE("csv headers are stable") {
  CHECK(csv_header(Experiment::tradeoff_snr) ==
        std::vector<std::string>{"n", "k", "m", "snr_db", "e_th", "e_min",
                                 "rho_achi", "rho_conv", "rate_achi",
                                 "rate_conv", "shannon_rate", "silent_achi",
                                 "silent_conv"});
  CHECK(csv_header(Experiment::montecarlo_verify) ==
        std::vector<std::string>{"n", "k", "m", "snr_db", "trials",
                                 "nmse_analytic", "nmse_empirical",
                                 "rel_err"});
  CHECK(csv_header(Experiment::crb_sweep) ==
        std::vector<std::string>{"parameter", "variation", "variation_value",
                                 "snr_db", "crb_trace"});
}

TEST_CASE("tradeoff runner writes the documented artifact") {
  TempFile tmp("runner_tradeoff.csv");
  RunConfig cfg = parse_config(
      R"({"experiment":"tradeoff_snr","grids":{"e_th":[1e-3,1e-2],"snr_db":[0,10]}})");
  cfg.output_path = tmp.path;
  const long rows = run_experiment(cfg);
  CHECK(rows == 4);

  const Csv csv = parse_csv(slurp(tmp.path));
  REQUIRE(csv.metadata.size() == 2);
  CHECK(csv.metadata[0] == std::string("# isac-fbl ") + kVersion);
  CHECK(csv.metadata[1] == "# config " + serialize_config(cfg));
  CHECK(csv.header == csv_header(Experiment::tradeoff_snr));
  REQUIRE(csv.rows.size() == 4);
  for (const auto& row : csv.rows) REQUIRE(row.size() == 13);

  // row 0 is (snr 0, e_th 1e-3), which sits exactly on the noise floor
  // e_min = 1e-3 at 0 dB: silent on both bounds, flags serialized as 1
  CHECK(std::stod(csv.rows[0][3]) == 0.0);
  CHECK(std::stod(csv.rows[0][4]) == doctest::Approx(1e-3).epsilon(1e-12));
  CHECK(csv.rows[0][11] == "1");
  CHECK(csv.rows[0][12] == "1");

  // row 1 is (snr 0, e_th 1e-2), live; cross-check against direct evaluation
  const TradeoffPoint p = tradeoff_point(1e-2, with_snr_db(cfg.system, 0.0));
  REQUIRE_FALSE(p.silent_achi);
  CHECK(std::stod(csv.rows[1][4]) == doctest::Approx(1e-2).epsilon(1e-12));
  CHECK(std::stod(csv.rows[1][8]) ==
        doctest::Approx(p.rate_achi).epsilon(1e-11).scale(0.0));
  CHECK(std::stod(csv.rows[1][9]) ==
        doctest::Approx(p.rate_conv).epsilon(1e-11).scale(0.0));
  CHECK(csv.rows[1][11] == "0");
}

TEST_CASE("surface runner nests blocklength outermost") {
  TempFile tmp("runner_surface.csv");
  RunConfig cfg = parse_config(
      R"({"experiment":"tradeoff_surface","grids":{"e_th":[1e-3],"snr_db":[0,10],"n":[200,800]}})");
  cfg.output_path = tmp.path;
  CHECK(run_experiment(cfg) == 4);
  const Csv csv = parse_csv(slurp(tmp.path));
  REQUIRE(csv.rows.size() == 4);
  CHECK(csv.rows[0][0] == "200");
  CHECK(csv.rows[1][0] == "200");
  CHECK(csv.rows[2][0] == "800");
  CHECK(csv.rows[3][0] == "800");
  CHECK(std::stod(csv.rows[0][3]) == 0.0);
  CHECK(std::stod(csv.rows[1][3]) == 10.0);
}

TEST_CASE("montecarlo runner reports consistent relative error") {
  TempFile tmp("runner_mc.csv");
  RunConfig cfg = parse_config(
      R"({"experiment":"montecarlo_verify","system":{"n":64,"k":4,"m":2},)"
      R"("grids":{"snr_db":[10]},"trials":200,"seed":11})");
  cfg.output_path = tmp.path;
  CHECK(run_experiment(cfg, 2) == 1);

  const Csv csv = parse_csv(slurp(tmp.path));
  REQUIRE(csv.rows.size() == 1);
  const auto& row = csv.rows[0];
  REQUIRE(row.size() == 8);
  CHECK(row[4] == "200");
  const double analytic = std::stod(row[5]);
  const double empirical = std::stod(row[6]);
  const double rel = std::stod(row[7]);
  CHECK(rel == doctest::Approx(std::abs(empirical - analytic) / analytic)
                   .epsilon(1e-9));
  CHECK(rel < 0.3);  // loose sanity at 200 trials
}

TEST_CASE("crb runner emits ordered blocks per parameter class") {
  TempFile tmp("runner_crb.csv");
  RunConfig cfg = parse_config(
      R"({"experiment":"crb_sweep","system":{"k":4,"n":256},)"
      R"("grids":{"snr_db":[0,10]},)"
      R"("variations":{"m":[8,64],"fc":[3e9,60e9],"n":[200,800]},"seed":5})");
  cfg.output_path = tmp.path;
  CHECK(run_experiment(cfg) == 12);

  const Csv csv = parse_csv(slurp(tmp.path));
  REQUIRE(csv.rows.size() == 12);
  // aoa block first, then range, then velocity
  CHECK(csv.rows[0][0] == "aoa");
  CHECK(csv.rows[0][1] == "m");
  CHECK(csv.rows[4][0] == "range");
  CHECK(csv.rows[4][1] == "fc");
  CHECK(csv.rows[8][0] == "velocity");
  CHECK(csv.rows[8][1] == "n");
  for (const auto& row : csv.rows) CHECK(std::stod(row[4]) > 0.0);

  // within a block: variation ascending, then SNR ascending
  CHECK(std::stod(csv.rows[0][2]) == 8.0);
  CHECK(std::stod(csv.rows[0][3]) == 0.0);
  CHECK(std::stod(csv.rows[1][3]) == 10.0);
  CHECK(std::stod(csv.rows[2][2]) == 64.0);

  // more SNR lowers the CRB within each variation
  for (int b = 0; b < 12; b += 2)
    CHECK(std::stod(csv.rows[b][4]) > std::stod(csv.rows[b + 1][4]));
  // more antennas help AoA; longer windows help velocity
  CHECK(std::stod(csv.rows[0][4]) > std::stod(csv.rows[2][4]));
  CHECK(std::stod(csv.rows[8][4]) > std::stod(csv.rows[10][4]));
}

TEST_CASE("runner outputs are independent of the thread count") {
  RunConfig cfg = parse_config(
      R"({"experiment":"montecarlo_verify","system":{"n":64,"k":4,"m":2},)"
      R"("grids":{"snr_db":[0,10]},"trials":64,"seed":2})");
  TempFile a("runner_threads1.csv");
  TempFile b("runner_threads4.csv");
  cfg.output_path = a.path;
  run_experiment(cfg, 1);
  cfg.output_path = b.path;
  run_experiment(cfg, 4);
  // identical except for the embedded output path in the config echo
  const Csv csv_a = parse_csv(slurp(a.path));
  const Csv csv_b = parse_csv(slurp(b.path));
  CHECK(csv_a.rows == csv_b.rows);
}

TEST_CASE("runner refuses to run without an output path") {
  RunConfig cfg = parse_config(
      R"({"experiment":"tradeoff_snr","grids":{"e_th":[1e-3],"snr_db":[0]}})");
  CHECK_THROWS_AS(run_experiment(cfg), ValidationError);
}
