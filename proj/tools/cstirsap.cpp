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

// Command-line front end: cstirsap <command> [--config FILE] [--key value ...] --out DIR

#include <iostream>
#include <map>
#include <string>

#include <CLI11.hpp>

#include "cstirsap/cli.hpp"

namespace {

using cstirsap::cli::Json;

struct FlagSpec {
  std::string key;
  std::string names;
  bool numeric = true;
};

const std::vector<FlagSpec>& flag_specs() {
  static const std::vector<FlagSpec> specs = {
      {"protocol", "--protocol", false},
      {"omega0_pi_mhz", "--omega0-pi-mhz"},
      {"tf_us", "--tf-us"},
      {"sigma_frac", "--sigma-frac"},
      {"tau_frac", "--tau-frac"},
      {"delta_pi_ghz", "--delta-pi-ghz"},
      {"gamma_pi", "--gamma-pi,--gamma"},
      {"steps", "--steps", false},
      {"decay.g1_mhz", "--decay-g1-mhz"},
      {"decay.g2_mhz", "--decay-g2-mhz"},
      {"decay.g3_mhz", "--decay-g3-mhz"},
      {"decay.g4_mhz", "--decay-g4-mhz"},
      {"decay.g5_mhz", "--decay-g5-mhz"},
      {"record_points", "--record-points"},
      {"omega0_grid_pi_mhz", "--omega0-grid-pi-mhz", false},
      {"tf_grid_us", "--tf-grid-us", false},
      {"gamma_grid_pi", "--gamma-grid-pi", false},
      {"grid_tf_us", "--grid-tf-us", false},
      {"delta_list_pi_ghz", "--delta-list-pi-ghz", false},
      {"stirap_omega0_pi_mhz", "--stirap-omega0-pi-mhz"},
  };
  return specs;
}

Json flag_value(const FlagSpec& spec, const std::string& text) {
  if (spec.key == "steps") {
    if (text == "auto") return text;
  } else if (!spec.numeric) {
    return text;
  }
  try {
    std::size_t used = 0;
    const double x = std::stod(text, &used);
    if (used == text.size()) return x;
  } catch (const std::exception&) {
  }
  throw cstirsap::ValidationError("flag for '" + spec.key + "' expects a number, got '" + text + "'");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Chainwise stimulated Raman (shortcut-to-)adiabatic passage simulator"};
  app.require_subcommand(1);

  std::string config_path;
  std::string out_dir = ".";
  unsigned threads = 0;
  std::map<std::string, std::string> raw;

  const std::vector<std::pair<std::string, std::string>> commands = {
      {"simulate", "Integrate one protocol over [0, tf] and write the trajectory"},
      {"sweep-rabi", "Efficiency of both Gaussian protocols versus omega0"},
      {"sweep-time", "Efficiency of both Gaussian protocols versus tf"},
      {"grid", "Chosen-path efficiency over gamma x tf"},
      {"amplitudes", "Peak modified Omega1 versus tf and delta"},
      {"roundtrip", "Chosen-path creation followed by detection"},
  };
  for (const auto& [name, help] : commands) {
    CLI::App* sub = app.add_subcommand(name, help);
    sub->add_option("--config", config_path, "JSON config file");
    sub->add_option("--out", out_dir, "Output directory");
    sub->add_option("--threads", threads, "Sweep worker threads (0 = all cores)");
    for (const auto& spec : flag_specs()) sub->add_option(spec.names, raw[spec.key], spec.key);
  }
  std::string manifest_path;
  CLI::App* replay = app.add_subcommand("replay", "Re-run the command recorded in a manifest");
  replay->add_option("manifest", manifest_path, "manifest.json of a previous run")->required();
  replay->add_option("--out", out_dir, "Output directory");
  replay->add_option("--threads", threads, "Sweep worker threads (0 = all cores)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : cstirsap::cli::kExitValidation;
  }

  try {
    cstirsap::cli::RunOutcome outcome;
    if (replay->parsed()) {
      outcome = cstirsap::cli::replay(manifest_path, out_dir, threads);
    } else {
      CLI::App* sub = app.get_subcommands().front();
      Json flags = Json::object();
      for (const auto& spec : flag_specs()) {
        const std::string first = spec.names.substr(0, spec.names.find(','));
        if (sub->count(first) > 0) flags[spec.key] = flag_value(spec, raw[spec.key]);
      }
      const Json file = config_path.empty() ? Json::object() : cstirsap::cli::load_config_file(config_path);
      const auto settings = cstirsap::cli::parse_config(file, flags);
      outcome = cstirsap::cli::run(cstirsap::cli::command_from_string(sub->get_name()), settings, out_dir, threads);
    }
    std::cout << outcome.summary.dump(2) << '\n';
    return outcome.exit_code;
  } catch (const cstirsap::ValidationError& e) {
    std::cerr << "validation error: " << e.what() << '\n';
    return cstirsap::cli::kExitValidation;
  } catch (const cstirsap::ResolutionError& e) {
    std::cerr << "resolution error: " << e.what() << '\n';
    return cstirsap::cli::kExitResolution;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
}
