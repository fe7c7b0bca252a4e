// Copyright 2026 The cstirsap Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

#include "cstirsap/cli.hpp"
#include "cstirsap/experiments.hpp"

using namespace cstirsap;
using namespace cstirsap::cli;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / ("cstirsap_test_cli_" + name);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

std::string slurp(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

Json read_json(const fs::path& path) { return Json::parse(slurp(path)); }

int tool(const std::string& args) {
  const std::string cmd = std::string("\"") + CSTIRSAP_TOOL + "\" " + args + " > /dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

}  // namespace

TEST_CASE("defaults reproduce the standard counter-diabatic configuration") {
  const RunSettings s = parse_config(Json::object(), Json{{"protocol", "cd"}});
  const SystemConfig ref = experiments::standard_cd_config();
  CHECK(s.system.protocol == Protocol::CStirsapCd);
  CHECK(s.system.delta.rad_per_us() == doctest::Approx(ref.delta.rad_per_us()).epsilon(1e-15));
  CHECK(s.system.decay == ref.decay);
  const auto& p = std::get<PulseParams>(s.system.pulse);
  const auto& q = std::get<PulseParams>(ref.pulse);
  CHECK(p.omega0.rad_per_us() == doctest::Approx(q.omega0.rad_per_us()).epsilon(1e-15));
  CHECK(p.sigma_us == doctest::Approx(q.sigma_us).epsilon(1e-15));
  CHECK(p.tau_us == doctest::Approx(q.tau_us).epsilon(1e-15));
  CHECK(p.tf_us == q.tf_us);
  CHECK(s.auto_steps);
  CHECK(s.protocol_explicit);
  CHECK_FALSE(parse_config(Json::object(), Json::object()).protocol_explicit);
}

TEST_CASE("flags override file values") {
  const RunSettings s = parse_config(Json{{"tf_us", 2.0}, {"omega0_pi_mhz", 40.0}}, Json{{"tf_us", 0.5}});
  const auto& p = std::get<PulseParams>(s.system.pulse);
  CHECK(p.tf_us == 0.5);
  CHECK(p.sigma_us == doctest::Approx(0.5 / 6.0));
  CHECK(p.omega0.rad_per_us() == doctest::Approx(40.0 * kPi));
  CHECK(s.config.at("tf_us").get<double>() == 0.5);
}

TEST_CASE("configuration errors") {
  SUBCASE("unknown key is named") {
    try {
      parse_config(Json{{"omega_zero", 1.0}}, Json::object());
      FAIL("expected a validation error");
    } catch (const ValidationError& e) {
      CHECK(std::string(e.what()).find("omega_zero") != std::string::npos);
    }
  }
  SUBCASE("zero gamma quotes the rule") {
    try {
      parse_config(Json::object(), Json{{"gamma_pi", 0.0}});
      FAIL("expected a validation error");
    } catch (const ValidationError& e) {
      CHECK(std::string(e.what()).find("gamma must not be zero") != std::string::npos);
    }
  }
  CHECK_THROWS_AS(parse_config(Json::object(), Json{{"protocol", "bogus"}}), ValidationError);
  CHECK_THROWS_AS(parse_config(Json::object(), Json{{"decay.g2_mhz", -1.0}}), ValidationError);
  CHECK_THROWS_AS(parse_config(Json::object(), Json{{"tf_us", "one"}}), ValidationError);
  CHECK_THROWS_AS(parse_config(Json::object(), Json{{"steps", 500}}), ResolutionError);
}

TEST_CASE("config file loading flattens decay rates") {
  const fs::path dir = scratch("load");
  {
    std::ofstream f(dir / "cfg.json");
    f << "{\n  // comment\n  \"protocol\": \"stirap\",\n  \"decay\": {\"g1_mhz\": 0.5, \"g3_mhz\": 0}\n}\n";
  }
  const Json j = load_config_file(dir / "cfg.json");
  CHECK(j.at("decay.g1_mhz").get<double>() == 0.5);
  const RunSettings s = parse_config(j, Json::object());
  CHECK(s.system.protocol == Protocol::CStirap);
  CHECK(s.system.decay[0] == 0.5);
  CHECK(s.system.decay[2] == 0.0);
  CHECK(s.system.decay[1] == 30.0);
  CHECK_THROWS_AS(load_config_file(dir / "missing.json"), ValidationError);
}

TEST_CASE("grid syntax") {
  CHECK(parse_grid(Json::array({1, 2, 3}), "g") == std::vector<double>{1, 2, 3});
  CHECK(parse_grid("1, 1.5,2", "g") == std::vector<double>{1, 1.5, 2});
  CHECK(parse_grid("0:1:0.25", "g").size() == 5);
  CHECK(parse_grid("0:1:#3", "g") == std::vector<double>{0, 0.5, 1});
  CHECK_THROWS_AS(parse_grid("", "g"), ValidationError);
  CHECK_THROWS_AS(parse_grid("0:1", "g"), ValidationError);
  const RunSettings s = parse_config(Json::object(), Json::object());
  CHECK(s.omega0_grid.size() == 49);
  CHECK(s.omega0_grid.front() == doctest::Approx(10.0 * kPi));
  CHECK(s.gamma_grid.size() == 50);
  CHECK(s.delta_list.back() == doctest::Approx(2000.0 * kPi));
}

TEST_CASE("number formatting") {
  CHECK(format_number(0.1) == "0.1");
  CHECK(format_number(1.0 / 3.0) == "0.333333333333");
  CHECK(format_number(std::nan("")) == "nan");
  CHECK(format_number(-HUGE_VAL) == "-inf");
  CHECK(round_to_precision(1.0 / 3.0) == 0.333333333333);
}

TEST_CASE("trajectory CSV round trip at 12 significant digits") {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(-1e3, 1e3);
  Trajectory tr;
  for (int k = 0; k < 200; ++k) {
    tr.times.push_back(u(rng));
    tr.populations.push_back({u(rng), u(rng), 1e-17 * u(rng), u(rng), u(rng)});
    tr.trace.push_back(u(rng));
    tr.fields.push_back({u(rng), u(rng), u(rng), u(rng), u(rng)});
  }
  std::stringstream buf;
  write_trajectory_csv(buf, tr);
  const std::string first = buf.str();
  CHECK(first.substr(0, first.find('\n')) == "t_us,p1,p2,p3,p4,p5,trace,omega1,omega2,omega3,omega4,omega_cd");
  const Trajectory back = read_trajectory_csv(buf);
  REQUIRE(back.size() == tr.size());
  for (std::size_t k = 0; k < tr.size(); ++k) {
    CHECK(back.times[k] == round_to_precision(tr.times[k]));
    for (int j = 0; j < 5; ++j) CHECK(back.populations[k][j] == round_to_precision(tr.populations[k][j]));
    CHECK(back.fields[k].omega_cd == round_to_precision(tr.fields[k].omega_cd));
  }
  std::stringstream again;
  write_trajectory_csv(again, back);
  CHECK(again.str() == first);
}

TEST_CASE("simulate writes a trajectory whose last row has transferred") {
  const fs::path dir = scratch("simulate");
  const RunOutcome o = run(Command::Simulate, parse_config(Json::object(), Json::object()), dir);
  CHECK(o.exit_code == kExitOk);
  std::ifstream in(dir / "trajectory.csv");
  const Trajectory tr = read_trajectory_csv(in);
  CHECK(tr.populations.back()[4] >= 0.95);
  CHECK(tr.times.back() == doctest::Approx(1.0));
  CHECK(tr.size() >= 2000);
  const Json summary = read_json(dir / "summary.json");
  CHECK(summary.at("efficiency").get<double>() >= 0.95);
  const Json manifest = read_json(dir / "manifest.json");
  CHECK(manifest.at("command") == "simulate");
  CHECK(manifest.at("tool_version") == kToolVersion);
  CHECK(manifest.at("config").at("omega0_pi_mhz").get<double>() == 30.0);
  CHECK(manifest.contains("duration_s"));
}

TEST_CASE("closed system keeps a unit trace column") {
  const fs::path dir = scratch("closed");
  Json flags = Json::object();
  for (int j = 1; j <= 5; ++j) flags["decay.g" + std::to_string(j) + "_mhz"] = 0.0;
  run(Command::Simulate, parse_config(Json::object(), flags), dir);
  std::ifstream in(dir / "trajectory.csv");
  const Trajectory tr = read_trajectory_csv(in);
  for (double t : tr.trace) CHECK(std::abs(t - 1.0) < 1e-8);
}

TEST_CASE("manifest replay reproduces outputs byte for byte") {
  struct Case {
    Command command;
    Json flags;
  };
  const std::vector<Case> cases = {
      {Command::Simulate, Json{{"protocol", "stirap"}, {"omega0_pi_mhz", 100.0}}},
      {Command::SweepRabi, Json{{"omega0_grid_pi_mhz", "20,120"}}},
      {Command::Amplitudes, Json{{"tf_grid_us", "0.5,1"}}},
      {Command::Grid, Json{{"gamma_grid_pi", "0.3"}, {"grid_tf_us", "0.5"}}},
  };
  for (const auto& c : cases) {
    CAPTURE(to_string(c.command));
    const fs::path a = scratch("replay_a");
    const fs::path b = scratch("replay_b");
    const RunOutcome first = run(c.command, parse_config(Json::object(), c.flags), a);
    const RunOutcome second = replay(a / "manifest.json", b);
    REQUIRE(first.files.size() == second.files.size());
    for (const auto& f : first.files) {
      if (f.filename() == "manifest.json") continue;
      CHECK(slurp(f) == slurp(b / f.filename()));
    }
    Json ma = read_json(a / "manifest.json");
    Json mb = read_json(b / "manifest.json");
    ma.erase("duration_s");
    mb.erase("duration_s");
    CHECK(ma == mb);
  }
}

TEST_CASE("sweep CSV layout") {
  const fs::path dir = scratch("sweep");
  run(Command::SweepRabi, parse_config(Json::object(), Json{{"omega0_grid_pi_mhz", "0,30"}}), dir);
  std::ifstream in(dir / "sweep.csv");
  std::string header;
  std::getline(in, header);
  CHECK(header == "protocol,omega0_pi_mhz,efficiency");
  std::string row;
  std::getline(in, row);
  CHECK(row == "cd,0,nan");
  const Json manifest = read_json(dir / "manifest.json");
  CHECK(manifest.at("failures").size() == 2);
  CHECK(manifest.at("exit_code") == kExitValidation);
}

TEST_CASE("tool exit codes") {
  const fs::path dir = scratch("tool");
  const std::string out = " --out \"" + dir.string() + "\"";
  CHECK(tool("simulate --steps 5000 --omega0-pi-mhz 1 --delta-pi-ghz 0.001" + out) == 0);
  CHECK(tool("simulate --gamma 0" + out) == 2);
  CHECK(tool("simulate --steps 20000" + out) == 3);
  CHECK(tool("simulate --bogus-key 1" + out) != 0);
  {
    std::ofstream f(dir / "bad.json");
    f << "{\"not_a_key\": 1}";
  }
  CHECK(tool("simulate --config \"" + (dir / "bad.json").string() + "\"" + out) == 2);
  CHECK(tool("roundtrip --protocol cd" + out) == 2);
  CHECK(tool("replay \"" + (dir / "manifest.json").string() + "\" --out \"" + (dir / "again").string() + "\"") == 0);
}
