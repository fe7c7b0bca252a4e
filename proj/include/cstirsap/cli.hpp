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

#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "cstirsap/experiments.hpp"
#include "cstirsap/model.hpp"

/// Configuration, serialization and command dispatch for the command-line
/// tool.
///
/// Config keys (angles in units of pi, frequencies as the named unit):
///   protocol            "stirap" | "cd" | "chosen-path"
///   omega0_pi_mhz       Gaussian amplitude, default 30
///   tf_us               operation time, default 1
///   sigma_frac          sigma / tf, default 1/6
///   tau_frac            tau / tf, default 1/10
///   delta_pi_ghz        detuning, default 2
///   gamma_pi            chosen-path gamma, default 0.3
///   steps               integrator steps per window or "auto"
///   decay.g1_mhz .. decay.g5_mhz   default 0.01, 30, 0.06, 30, 0
///   record_points       trajectory rows kept (decimation target), default 2000
///   omega0_grid_pi_mhz, tf_grid_us, gamma_grid_pi, grid_tf_us, delta_list_pi_ghz
///                       sweep grids as arrays, "a,b,c", "start:stop:step" or
///                       "start:stop:#count" strings
///   stirap_omega0_pi_mhz  plain-STIRAP amplitude for sweep-time, default 125
namespace cstirsap::cli {

using Json = nlohmann::ordered_json;

inline constexpr const char* kToolVersion = "1.0.0";

/// Fully resolved settings; `config` is the canonical post-default key set.
struct RunSettings {
  Json config;
  SystemConfig system;
  bool auto_steps = true;
  /// Whether protocol came from a file or flag rather than the default.
  bool protocol_explicit = false;
  int record_points = 2000;
  std::vector<double> omega0_grid;  // rad/us
  std::vector<double> tf_grid;      // us
  std::vector<double> gamma_grid;   // rad
  std::vector<double> grid_tf;      // us
  std::vector<double> delta_list;   // rad/us
  AngularFrequency stirap_omega0;
};

Json default_config();

/// Names of every accepted key, dotted for nested decay rates.
const std::vector<std::string>& config_keys();

/// Loads a JSON config file, flattening the "decay" object into dotted keys.
Json load_config_file(const std::filesystem::path& path);

/// Defaults <- file values <- flag values. Unknown keys and invariant
/// violations throw ValidationError naming the key or the rule.
RunSettings parse_config(const Json& file_values, const Json& flag_values);

/// Converts "start:stop:step", "start:stop:#count", "a,b,c" or a JSON array
/// to numbers.
std::vector<double> parse_grid(const Json& value, const std::string& key);

/// 12 significant digits, "nan"/"inf" for non-finite values.
std::string format_number(double value);
double round_to_precision(double value);

void write_trajectory_csv(std::ostream& out, const Trajectory& trajectory);
Trajectory read_trajectory_csv(std::istream& in);

/// Long format: parameter columns first, the value column last.
void write_sweep_csv(std::ostream& out, const experiments::SweepResult& result);

enum class Command { Simulate, SweepRabi, SweepTime, Grid, Amplitudes, RoundTrip };

Command command_from_string(const std::string& name);
std::string to_string(Command command);

inline constexpr int kExitOk = 0;
inline constexpr int kExitValidation = 2;
inline constexpr int kExitResolution = 3;

struct RunOutcome {
  int exit_code = kExitOk;
  Json summary;
  Json manifest;
  std::vector<std::filesystem::path> files;
};

/// Executes `command` and writes its outputs plus summary.json and
/// manifest.json into `out_dir`.
RunOutcome run(Command command, const RunSettings& settings, const std::filesystem::path& out_dir,
               unsigned threads = 0);

/// Re-runs the command recorded in a manifest with its resolved config.
RunOutcome replay(const std::filesystem::path& manifest_path, const std::filesystem::path& out_dir,
                  unsigned threads = 0);

}  // namespace cstirsap::cli
