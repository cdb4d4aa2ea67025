#include <cmath>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>
#include <string>

#include "doctest.h"
#include "json.hpp"
#include "qrotor/commands.hpp"
#include "qrotor/config.hpp"
#include "qrotor/errors.hpp"
#include "qrotor/output.hpp"

using namespace qrotor;
namespace fs = std::filesystem;

namespace {

const std::string kMinimal = R"({"species": {"preset": "6Li"}, "beam": {"waist_w0": 10e-6, "oam_l": 5, "phase_z0": 1e-7}})";

fs::path write_temp(const std::string& name, const std::string& text) {
  const fs::path dir = fs::temp_directory_path() / "qrotor_unit_tests";
  fs::create_directories(dir);
  const fs::path p = dir / name;
  std::ofstream(p) << text;
  return p;
}

fs::path shipped(const std::string& name) { return fs::path(QROTOR_CONFIG_DIR) / name; }

std::string config_error_field(const std::string& text) {
  try {
    parse_config_text(text);
  } catch (const ConfigError& e) {
    return e.field();
  }
  return "<no error>";
}

struct CliRun {
  int code;
  std::string out;
  std::string err;
};

CliRun cli(const std::vector<std::string>& args) {
  std::ostringstream out, err;
  const int code = run_cli(args, out, err);
  return {code, out.str(), err.str()};
}

}  // namespace

TEST_SUITE("config") {

TEST_CASE("minimal config gets defaults") {
  const RunConfig cfg = parse_config_text(kMinimal);
  CHECK(cfg.beam.wavelength == 671e-9);
  CHECK(cfg.beam.radial_p == 0);
  CHECK(cfg.species.label == "6Li");
  CHECK(cfg.output_format == OutputFormat::csv);
  CHECK(cfg.parallelism == 1);
  CHECK_FALSE(cfg.raman.has_value());
  CHECK(cfg.sensor.kick_oam_L == 25);
  // Default frequency uncertainty is the fractional-stability model.
  CHECK(cfg.sensor.freq_uncertainty_pump + cfg.sensor.freq_uncertainty_stokes ==
        doctest::Approx(2e-18 * 1.43e9));
  const Json echo = config_to_json(cfg);
  CHECK(echo.contains("beam"));
  CHECK(echo.contains("sensor"));
  CHECK_FALSE(echo.contains("parallelism"));
}

TEST_CASE("validation failures name the field") {
  CHECK(config_error_field(R"({"beam": {"phase_z0": 671e-9}})") == "beam.phase_z0");
  CHECK(config_error_field(R"({"beam": {"waist_w0": -1}})") == "beam.waist_w0");
  CHECK(config_error_field(R"({"beam": {"colour": 1}})") == "beam.colour");
  CHECK(config_error_field(R"({"beams": {}})") == "beams");
  CHECK(config_error_field(R"({"beam": {"trap_depth_V0": 1e-29, "trap_depth_E0_units": 10}})").rfind("beam.", 0) == 0);
  CHECK(config_error_field(R"({"sensor": {"ring_count_N": 160}})") == "sensor.ring_count_N");
  CHECK(config_error_field(R"({"parallelism": 0})") == "parallelism");
  CHECK(config_error_field(R"({"beam": {"oam_l": "five"}})") == "beam.oam_l");
  CHECK_THROWS_AS(parse_config_text("{not json"), ConfigError);
  CHECK_THROWS_AS(parse_config("/nonexistent/qrotor.json"), ConfigError);
}

TEST_CASE("Fig. 2 reference config") {
  const RunConfig cfg = parse_config(shipped("fig2.json"));
  CHECK(cfg.beam.waist_w0 == 10e-6);
  CHECK(cfg.beam.oam_l == 5);
  CHECK(cfg.beam.radial_p == 0);
  CHECK(cfg.beam.trap_depth_V0 == doctest::Approx(10.0 * recoil_energy(cfg.species, cfg.beam.wavelength)));
}

TEST_CASE("all shipped configs parse") {
  for (const char* name : {"fig2.json", "fig4.json", "sensor.json", "tilt.json"}) {
    CAPTURE(name);
    CHECK_NOTHROW(parse_config(shipped(name)));
  }
}

}

TEST_SUITE("cli") {

TEST_CASE("number formatting and writers") {
  CHECK(format_double(1.0) == "1.00000000e+00");
  CHECK(format_double(-0.0) == "0.00000000e+00");
  CHECK(format_double(2.254e-12) == "2.25400000e-12");
  std::ostringstream csv_out;
  CsvWriter csv(csv_out, {"a", "b", "c"});
  csv.row({1.5, 3LL, std::string("x")});
  CHECK(csv_out.str() == "a,b,c\n1.50000000e+00,3,x\n");
  CHECK_THROWS(csv.row({1.0}));
  std::ostringstream json_out;
  Json j;
  j["v"] = 0.25;
  j["bad"] = std::nan("");
  j["n"] = 7;
  write_json(json_out, j);
  CHECK(json_out.str() == "{\n  \"v\": 2.50000000e-01,\n  \"bad\": null,\n  \"n\": 7\n}\n");
}

TEST_CASE("unknown or missing subcommand is a usage error") {
  const auto cfg = write_temp("minimal.json", kMinimal).string();
  const CliRun bogus = cli({"--config", cfg, "bogus"});
  CHECK(bogus.code == exit_code::usage);
  CHECK(bogus.err.find("Usage") != std::string::npos);
  CHECK(cli({"--config", cfg}).code == exit_code::usage);
  CHECK(cli({"budget"}).code == exit_code::usage);
}

TEST_CASE("config errors map to exit code 2") {
  const auto cfg = write_temp("bad_z0.json", R"({"beam": {"phase_z0": 671e-9}})").string();
  const CliRun r = cli({"--config", cfg, "tilt"});
  CHECK(r.code == exit_code::config);
  CHECK(r.err.find("beam.phase_z0") != std::string::npos);
}

TEST_CASE("budget reproduces the frequency channel") {
  const CliRun r = cli({"--config", shipped("sensor.json").string(), "--format", "json", "budget"});
  REQUIRE(r.code == exit_code::ok);
  const auto j = nlohmann::json::parse(r.out);
  CHECK(j.at("dOmega_freq").get<double>() == doctest::Approx(2.25e-12).epsilon(0.01));
  CHECK(j.at("inputs").contains("kick_oam_L"));
}

TEST_CASE("rotation scan at zero rotation shows three lines") {
  const CliRun r = cli({"--config", shipped("sensor.json").string(), "--format", "csv", "--omega", "0",
                        "rotation-scan"});
  REQUIRE(r.code == exit_code::ok);
  std::istringstream in(r.out);
  std::string line;
  std::getline(in, line);
  CHECK(line == "Omega,line_id,m_ell,zeta,frequency");
  std::set<std::string> freqs;
  int rows = 0;
  while (std::getline(in, line)) {
    ++rows;
    freqs.insert(line.substr(line.rfind(',') + 1));
  }
  CHECK(rows == 6);
  CHECK(freqs.size() == 3);
}

TEST_CASE("spectrum CSV header and strict validity") {
  const CliRun r = cli({"--config", shipped("fig2.json").string(), "spectrum"});
  REQUIRE(r.code == exit_code::ok);
  CHECK(r.out.rfind("n_z,n_r,m_ell,energy_J,energy_kB_nK,degeneracy\n", 0) == 0);

  // A huge threshold breaks the inequality chain; --strict makes that fatal.
  const auto cfg = write_temp("strict.json", R"({"beam": {"trap_depth_E0_units": 10}, "spectrum": {"ratio_threshold": 1e9}})").string();
  const CliRun loose = cli({"--config", cfg, "spectrum"});
  CHECK(loose.code == exit_code::ok);
  CHECK(loose.err.find("warning") != std::string::npos);
  CHECK(cli({"--config", cfg, "--strict", "spectrum"}).code == exit_code::validity);
}

TEST_CASE("output file and determinism") {
  const fs::path dir = fs::temp_directory_path() / "qrotor_unit_tests";
  fs::create_directories(dir);
  const auto a = (dir / "tilt_a.json").string(), b = (dir / "tilt_b.json").string();
  REQUIRE(cli({"--config", shipped("tilt.json").string(), "--out", a, "tilt"}).code == 0);
  REQUIRE(cli({"--config", shipped("tilt.json").string(), "--out", b, "--parallel", "3", "tilt"}).code == 0);
  std::ifstream fa(a, std::ios::binary), fb(b, std::ios::binary);
  std::stringstream sa, sb;
  sa << fa.rdbuf();
  sb << fb.rdbuf();
  CHECK(!sa.str().empty());
  CHECK(sa.str() == sb.str());
  const auto j = nlohmann::json::parse(sa.str());
  CHECK(j.at("command") == "tilt");
}

}
