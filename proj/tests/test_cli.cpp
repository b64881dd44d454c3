#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

#include <unistd.h>

#include "chirp4/commands.hpp"
#include "chirp4/scenario.hpp"
#include "chirp4/units.hpp"

using namespace chirp4;
namespace fs = std::filesystem;

namespace {

const char* kTransfer = R"({
  "system": "85Rb-D1",
  "pulse": {"intensity": 833.8, "fwhm": 2.99353, "chirp": -2.94752, "detuning": 0}
})";

std::string error_of(std::string_view text) {
  try {
    parse_scenario(text);
  } catch (const ConfigError& e) {
    return e.what();
  }
  return "";
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

struct TempDir {
  fs::path path;
  TempDir() {
    static int counter = 0;
    path = fs::temp_directory_path() /
           ("chirp4_test_" + std::to_string(::getpid()) + "_" + std::to_string(counter++));
    fs::remove_all(path);
  }
  ~TempDir() { fs::remove_all(path); }
};

RunOptions to(const fs::path& dir) {
  RunOptions o;
  o.out_dir = dir;
  o.threads = 2;
  return o;
}

std::vector<double> last_populations(const Table& t, std::size_t n_levels) {
  std::vector<double> p;
  for (std::size_t i = 1; i <= n_levels; ++i) p.push_back(std::get<double>(t.rows.back()[i]));
  return p;
}

}  // namespace

TEST_CASE("scenario from intensity and FWHM") {
  const auto s = parse_scenario(kTransfer);
  CHECK(s.pulse.rabi_peak == doctest::Approx(3.035).epsilon(0.005));
  CHECK(s.pulse.tau0 == doctest::Approx(1.798).epsilon(1e-3));
  CHECK(s.pulse.chirp == -2.94752);
  CHECK(s.pulse.detuning == 0.0);
  REQUIRE(s.intensity.has_value());
  CHECK(*s.intensity == 833.8);
  CHECK(s.system.label == "85Rb-D1");
  CHECK(s.system_validated);
  CHECK(s.format == TableFormat::Csv);
  CHECK(s.integration.n_samples == 2000);
}

TEST_CASE("scenario with explicit constants and options") {
  const auto s = parse_scenario(R"({
    // comments are allowed
    "system": {"preset": "87Rb-D2", "omega43": 0.2, "n_levels": 4},
    "pulse": {"rabi_peak": 5, "tau0": 2, "t_peak": 1},
    "integration": {"window_sigmas": 6, "n_samples": 11, "max_step": 0.01},
    "sweep": {"chirp_min": -1, "chirp_max": 1, "n_chirp": 3, "n_fwhm": 1},
    "detuning": {"min": 0, "max": 3, "count": 4},
    "output": {"dir": "out", "format": "json"}
  })");
  CHECK(s.system.omega21 == 6.835);
  CHECK(s.system.omega43 == 0.2);
  CHECK_FALSE(s.system_validated);
  CHECK(s.pulse.rabi_peak == 5.0);
  CHECK(s.pulse.t_peak == 1.0);
  CHECK(s.integration.window_sigmas == 6.0);
  CHECK(s.integration.max_step == 0.01);
  CHECK(s.sweep.chirps(s.pulse) == std::vector<double>{-1.0, 0.0, 1.0});
  CHECK(s.sweep.fwhms(s.pulse) == std::vector<double>{units::tau0_to_fwhm(2.0)});
  CHECK(s.deltas == std::vector<double>{0.0, 1.0, 2.0, 3.0});
  CHECK(s.output_dir == "out");
  CHECK(s.format == TableFormat::Json);
}

TEST_CASE("scenario errors name the problem") {
  CHECK(error_of(R"({"system": "85Rb-D1", "pulse": {}})").find("rabi_peak") != std::string::npos);
  CHECK(error_of(R"({"system": "85Rb-D1", "pulse": {"rabi_peak": 1}})").find("tau0") != std::string::npos);
  CHECK(error_of(R"({"system": "85Rb-D1", "pulse": {"rabi_peak": 1, "tau0": 1, "fwhm": 2}})")
            .find("ambiguous") != std::string::npos);
  CHECK(error_of(R"({"system": "85Rb-D1", "pulse": {"rabi_peak": 1, "intensity": 1, "tau0": 1}})")
            .find("ambiguous") != std::string::npos);
  CHECK(error_of(R"({"system": "85Rb-D1", "pulse": {"rabi_peak": 1, "tau0": 1, "chrip": 2}})") ==
        "pulse.chrip: unknown key");
  CHECK(error_of(R"({"system": "85Rb-D1", "pulse": {"rabi_peak": 1, "tau0": 1}, "extra": 1})") ==
        "extra: unknown key");
  CHECK(error_of(R"({"system": "85Rb-D1", "pulse": {"rabi_peak": 1, "rabi_peak": 2, "tau0": 1}})")
            .find("duplicate") != std::string::npos);
  CHECK(error_of(R"({"system": "85Rb-D1", "pulse": {"rabi_peak": -1, "tau0": 1}})")
            .find("rabi_peak") != std::string::npos);
  CHECK(error_of(R"({"system": "Cs-D2", "pulse": {"rabi_peak": 1, "tau0": 1}})")
            .find("system") != std::string::npos);
  CHECK(error_of(R"({"system": "85Rb-D1", "pulse": {"rabi_peak": "fast", "tau0": 1}})")
            .find("pulse.rabi_peak") != std::string::npos);

  const auto syntax = error_of("{\n  \"system\": \"85Rb-D1\",\n  \"pulse\": {\"rabi_peak\": 1,,}\n}");
  CHECK(syntax.find("syntax error") != std::string::npos);
  CHECK(syntax.find("line 3") != std::string::npos);
}

TEST_CASE("emit_table") {
  Table t{{"t_ns", "P1", "P2", "P3", "P4"}, {}};
  CHECK(emit_table(t, TableFormat::Csv) == "t_ns,P1,P2,P3,P4\n");

  t.rows.push_back({0.5, 1.0, 0.0, 0.0, 0.0});
  CHECK(emit_table(t, TableFormat::Csv) == "t_ns,P1,P2,P3,P4\n0.5,1,0,0,0\n");
  CHECK(emit_table(t, TableFormat::Json) ==
        "{\n \"columns\": [\n  \"t_ns\",\n  \"P1\",\n  \"P2\",\n  \"P3\",\n  \"P4\"\n ],\n"
        " \"rows\": [\n  [\n   0.5,\n   1.0,\n   0.0,\n   0.0,\n   0.0\n  ]\n ]\n}\n");

  t.rows.push_back({1.0, 2.0});
  CHECK_THROWS_AS(emit_table(t, TableFormat::Csv), InputError);
  CHECK_THROWS_AS(emit_table(t, TableFormat::Json), InputError);

  CHECK(format_number(0.123456789012345) == "0.123456789012");
  CHECK(format_number(-0.0) == "0");
  CHECK(format_number(1e-20) == "1e-20");
  CHECK(emit_table({{"a,b", "q\"uote"}, {{std::string("x,y"), 1.0}}}, TableFormat::Csv) ==
        "\"a,b\",\"q\"\"uote\"\n\"x,y\",1\n");
}

TEST_CASE("CSV round trip reproduces the bytes") {
  std::mt19937_64 rng(8);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  std::uniform_int_distribution<int> e(-12, 12);
  for (int trial = 0; trial < 50; ++trial) {
    Table t{{"x", "y", "status"}, {}};
    for (int r = 0; r < 20; ++r) {
      t.rows.push_back({u(rng) * std::pow(10.0, e(rng)), u(rng), std::string(r % 3 ? "ok" : "failed")});
    }
    t.rows.push_back({std::nan(""), 0.0, std::string("a \"quoted\", field")});
    const auto bytes = emit_table(t, TableFormat::Csv);
    CHECK(emit_table(parse_csv(bytes), TableFormat::Csv) == bytes);
  }
}

TEST_CASE("command and grid parsing") {
  CHECK(parse_command("trace") == Command::Trace);
  CHECK(parse_command("compare3") == Command::Compare3);
  CHECK_THROWS_AS(parse_command("plot"), InputError);
  CHECK(parse_grid("101x81") == std::pair<std::size_t, std::size_t>{101, 81});
  CHECK(parse_grid("3X2") == std::pair<std::size_t, std::size_t>{3, 2});
  CHECK(parse_grid("1\xC3\x97" "1") == std::pair<std::size_t, std::size_t>{1, 1});
  CHECK_THROWS_AS(parse_grid("0x3"), InputError);
  CHECK_THROWS_AS(parse_grid("12"), InputError);
  CHECK_THROWS_AS(parse_grid("ax3"), InputError);
}

TEST_CASE("trace writes the sampled trajectory") {
  TempDir dir;
  const auto s = parse_scenario(kTransfer);
  std::ostringstream err;
  REQUIRE(dispatch(Command::Trace, s, to(dir.path), err) == kExitOk);
  const auto table = parse_csv(slurp(dir.path / "trace.csv"));
  CHECK(table.header == std::vector<std::string>{"t_ns", "P1", "P2", "P3", "P4", "norm"});
  CHECK(table.rows.size() == 2000);

  const auto expected = final_populations(propagate(s.system, s.pulse, s.integration));
  const auto got = last_populations(table, 4);
  for (std::size_t i = 0; i < 4; ++i) CHECK(got[i] == doctest::Approx(expected[i]).epsilon(1e-11));

  const auto meta = nlohmann::json::parse(slurp(dir.path / "meta.json"));
  CHECK(meta["command"] == "trace");
  CHECK(meta["system"]["validated"] == true);
  CHECK(meta["norm_drift"].get<double>() < 1e-8);
  CHECK(meta["pulse"]["intensity"] == 833.8);
}

TEST_CASE("check and compare3 write JSON reports") {
  TempDir dir;
  const auto s = parse_scenario(R"({"system": "85Rb-D1",
      "pulse": {"rabi_peak": 3.035, "tau0": 1.8, "chirp": -3}})");
  std::ostringstream err;
  REQUIRE(dispatch(Command::Check, s, to(dir.path), err) == kExitOk);
  auto report = nlohmann::json::parse(slurp(dir.path / "report.json"));
  CHECK(report["chirp_condition_met"] == true);
  CHECK(report["chirp_bandwidth_product"].get<double>() == doctest::Approx(5.4));

  REQUIRE(dispatch(Command::Compare3, s, to(dir.path), err) == kExitOk);
  report = nlohmann::json::parse(slurp(dir.path / "report.json"));
  CHECK(report["p_final_4lvl"].size() == 4);
  CHECK(report["p_final_3lvl"].size() == 3);
  CHECK(report["validity_flags"]["chirp_vs_omega43"]["ratio"].get<double>() ==
        doctest::Approx(5.4 / 0.362));
}

TEST_CASE("1x1 sweep matches the trace final row") {
  TempDir dir;
  const auto s = parse_scenario(kTransfer);
  std::ostringstream err;
  REQUIRE(dispatch(Command::Trace, s, to(dir.path), err) == kExitOk);
  auto opts = to(dir.path);
  opts.grid = {1, 1};
  REQUIRE(dispatch(Command::Sweep, s, opts, err) == kExitOk);

  const auto trace = parse_csv(slurp(dir.path / "trace.csv"));
  const auto sweep = parse_csv(slurp(dir.path / "sweep.csv"));
  REQUIRE(sweep.rows.size() == 1);
  CHECK(std::get<double>(sweep.rows[0][0]) == -2.94752);
  CHECK(std::get<double>(sweep.rows[0][1]) == 2.99353);
  for (std::size_t i = 0; i < 4; ++i) {
    CHECK(std::get<double>(sweep.rows[0][2 + i]) == std::get<double>(trace.rows.back()[1 + i]));
  }
  CHECK(std::get<std::string>(sweep.rows[0][6]) == "ok");
  for (int i = 1; i <= 4; ++i) CHECK(fs::exists(dir.path / ("sweep_P" + std::to_string(i) + ".csv")));
}

TEST_CASE("every subcommand is byte-for-byte repeatable") {
  const auto s = parse_scenario(R"({"system": "85Rb-D1",
      "pulse": {"rabi_peak": 3.035, "fwhm": 2, "chirp": -2},
      "integration": {"n_samples": 50},
      "sweep": {"chirp_min": -3, "chirp_max": 3, "n_chirp": 3, "fwhm_min": 1, "fwhm_max": 2, "n_fwhm": 2},
      "detuning": {"values": [0, 1.5, 3]}})");
  for (auto command : {Command::Trace, Command::Sweep, Command::Detuning, Command::Compare3, Command::Check}) {
    for (auto format : {TableFormat::Csv, TableFormat::Json}) {
      TempDir a, b;
      std::ostringstream err;
      auto oa = to(a.path);
      auto ob = to(b.path);
      oa.threads = 1;
      ob.threads = 3;
      oa.format = ob.format = format;
      REQUIRE(dispatch(command, s, oa, err) == kExitOk);
      REQUIRE(dispatch(command, s, ob, err) == kExitOk);
      for (const auto& entry : fs::directory_iterator(a.path)) {
        CAPTURE(entry.path().string());
        CHECK(slurp(entry.path()) == slurp(b.path / entry.path().filename()));
      }
    }
  }
}

TEST_CASE("intensity and Rabi frequency inputs agree") {
  const auto by_intensity = parse_scenario(kTransfer);
  const auto by_rabi = parse_scenario(R"({"system": "85Rb-D1",
      "pulse": {"rabi_peak": 3.035, "fwhm": 2.99353, "chirp": -2.94752}})");
  const auto a = final_populations(propagate(by_intensity.system, by_intensity.pulse));
  const auto b = final_populations(propagate(by_rabi.system, by_rabi.pulse));
  for (std::size_t i = 0; i < 4; ++i) {
    CAPTURE(i);
    CHECK(std::abs(a[i] - b[i]) <= 0.005 * std::max(b[i], 1e-3));
  }
}

TEST_CASE("dispatch error paths") {
  std::ostringstream err;
  auto s = parse_scenario(kTransfer);

  TempDir dir;
  fs::create_directories(dir.path);
  std::ofstream(dir.path / "blocker") << "x";
  CHECK(dispatch(Command::Check, s, to(dir.path / "blocker" / "sub"), err) == kExitIoError);
  CHECK(err.str().find("I/O error") != std::string::npos);

  err.str("");
  CHECK(dispatch(Command::Detuning, s, to(dir.path), err) == kExitInputError);
  CHECK(err.str().find("detuning") != std::string::npos);

  err.str("");
  s.integration.max_norm_drift = 1e-17;
  CHECK(dispatch(Command::Trace, s, to(dir.path), err) == kExitIntegrationError);

  err.str("");
  s.deltas = {0.0};
  CHECK(dispatch(Command::Detuning, s, to(dir.path), err) == kExitOk);
  CHECK(err.str().find("failed") != std::string::npos);
  const auto table = parse_csv(slurp(dir.path / "detuning.csv"));
  CHECK(std::get<std::string>(table.rows[0].back()) == "failed");
  const auto meta = nlohmann::json::parse(slurp(dir.path / "meta.json"));
  CHECK(meta["failed_cells"] == 1);
}
