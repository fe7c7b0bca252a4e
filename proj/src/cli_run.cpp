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

#include <algorithm>
#include <chrono>
#include <cmath>
#include <fstream>

#include "cstirsap/cli.hpp"
#include "cstirsap/dynamics.hpp"
#include "cstirsap/experiments.hpp"

namespace cstirsap::cli {

namespace {

namespace fs = std::filesystem;

Json num(double x) {
  if (!std::isfinite(x)) return format_number(x);
  return round_to_precision(x);
}

int stride_for(int steps, int record_points) { return std::max(1, steps / record_points); }

void write_text(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write '" + path.string() + "'");
  out << text;
}

fs::path write_trajectory(const fs::path& dir, const std::string& name, const Trajectory& tr) {
  std::ostringstream os;
  write_trajectory_csv(os, tr);
  const fs::path path = dir / name;
  write_text(path, os.str());
  return path;
}

Json trajectory_summary(const Trajectory& tr) {
  double max_p3 = 0.0;
  double max_excited = 0.0;
  for (const auto& p : tr.populations) {
    max_p3 = std::max(max_p3, p[2]);
    max_excited = std::max(max_excited, p[1] + p[3]);
  }
  Json s = Json::object();
  s["final_populations"] = Json::array();
  for (double x : tr.populations.back()) s["final_populations"].push_back(num(x));
  s["final_trace"] = num(tr.trace.back());
  s["max_p3"] = num(max_p3);
  s["max_excited"] = num(max_excited);
  return s;
}

Json failures_json(const experiments::SweepResult& r) {
  Json f = Json::array();
  for (const auto& x : r.failures) {
    const char* kind = x.kind == experiments::SweepFailure::Kind::Validation   ? "validation"
                       : x.kind == experiments::SweepFailure::Kind::Resolution ? "resolution"
                                                                               : "other";
    f.push_back({{"series", x.series}, {"index", x.index}, {"kind", kind}, {"message", x.message}});
  }
  return f;
}

int sweep_exit_code(const experiments::SweepResult& r) {
  int code = kExitOk;
  for (const auto& f : r.failures) {
    code = std::max(code, f.kind == experiments::SweepFailure::Kind::Validation ? kExitValidation
                                                                                 : kExitResolution);
  }
  return code;
}

Json sweep_summary(const experiments::SweepResult& r) {
  const bool amplitude = r.quantity == "amplitude";
  const double value_scale = amplitude ? 1.0 / kPi : 1.0;
  Json s = Json::object();
  s["quantity"] = amplitude ? "amplitude_pi_mhz" : "efficiency";
  s["cells"] = r.cell_count();
  s["failures"] = r.failures.size();
  Json series = Json::object();
  for (const auto& sr : r.series) {
    Json entry = Json::object();
    try {
      const std::size_t best = experiments::argmax(sr.values);
      entry["max"] = num(sr.values[best] * value_scale);
      const auto idx = r.unravel(best);
      Json at = Json::object();
      for (std::size_t k = 0; k < r.axes.size(); ++k) at[r.axes[k].name] = num(r.axes[k].values[idx[k]]);
      entry["argmax"] = at;
      double lowest = sr.values[best];
      for (double v : sr.values) {
        if (std::isfinite(v)) lowest = std::min(lowest, v);
      }
      entry["min"] = num(lowest * value_scale);
    } catch (const ValidationError&) {
      entry["max"] = nullptr;
    }
    series[sr.label] = entry;
  }
  s["series"] = series;
  return s;
}

fs::path write_sweep(const fs::path& dir, const experiments::SweepResult& r) {
  std::ostringstream os;
  write_sweep_csv(os, r);
  const fs::path path = dir / "sweep.csv";
  write_text(path, os.str());
  return path;
}

SystemConfig with_protocol(const RunSettings& s, Protocol protocol) {
  SystemConfig c = s.system;
  c.protocol = protocol;
  const double tf = s.system.window_us();
  if (protocol == Protocol::CStirsapChosenPath) {
    c.pulse = ChosenPathParams{kPi * s.config.at("gamma_pi").get<double>(), tf, Phase::Creation, c.delta};
  } else {
    const auto& cfg = s.config;
    c.pulse = PulseParams{unit_convert(cfg.at("omega0_pi_mhz").get<double>(), FrequencyUnit::PiMHz),
                          cfg.at("sigma_frac").get<double>() * tf, cfg.at("tau_frac").get<double>() * tf, tf};
  }
  c.validate();
  return c;
}

void require_chosen_path(const RunSettings& s, const char* command) {
  if (s.protocol_explicit && s.system.protocol != Protocol::CStirsapChosenPath) {
    throw ValidationError(std::string(command) + " requires the chosen-path protocol");
  }
}

}  // namespace

Command command_from_string(const std::string& name) {
  if (name == "simulate") return Command::Simulate;
  if (name == "sweep-rabi") return Command::SweepRabi;
  if (name == "sweep-time") return Command::SweepTime;
  if (name == "grid") return Command::Grid;
  if (name == "amplitudes") return Command::Amplitudes;
  if (name == "roundtrip") return Command::RoundTrip;
  throw ValidationError("unknown command '" + name + "'");
}

std::string to_string(Command command) {
  switch (command) {
    case Command::Simulate:
      return "simulate";
    case Command::SweepRabi:
      return "sweep-rabi";
    case Command::SweepTime:
      return "sweep-time";
    case Command::Grid:
      return "grid";
    case Command::Amplitudes:
      return "amplitudes";
    case Command::RoundTrip:
      return "roundtrip";
  }
  return "unknown";
}

RunOutcome run(Command command, const RunSettings& settings, const fs::path& out_dir, unsigned threads) {
  const auto started = std::chrono::steady_clock::now();
  fs::create_directories(out_dir);

  RunOutcome outcome;
  Json& summary = outcome.summary;
  summary["command"] = to_string(command);
  Json extra = Json::object();

  experiments::SweepOptions sweep_options;
  sweep_options.threads = threads;
  if (!settings.auto_steps) sweep_options.phase_per_step.reset();

  switch (command) {
    case Command::Simulate: {
      SystemConfig c = settings.system;
      if (settings.auto_steps) c = dynamics::with_resolved_steps(c);
      const Trajectory tr = dynamics::evolve(c, {stride_for(c.steps, settings.record_points)});
      outcome.files.push_back(write_trajectory(out_dir, "trajectory.csv", tr));
      summary["protocol"] = to_string(c.protocol);
      summary["efficiency"] = num(dynamics::transfer_efficiency(tr));
      summary.update(trajectory_summary(tr));
      summary["steps"] = c.steps;
      break;
    }
    case Command::SweepRabi: {
      const SystemConfig base = with_protocol(settings, settings.system.protocol == Protocol::CStirsapChosenPath
                                                            ? Protocol::CStirsapCd
                                                            : settings.system.protocol);
      const auto r = experiments::sweep_rabi_amplitude(base, settings.omega0_grid, sweep_options);
      outcome.files.push_back(write_sweep(out_dir, r));
      summary.update(sweep_summary(r));
      extra["failures"] = failures_json(r);
      outcome.exit_code = sweep_exit_code(r);
      break;
    }
    case Command::SweepTime: {
      const SystemConfig base = with_protocol(settings, Protocol::CStirsapCd);
      const auto r = experiments::sweep_operation_time(base, settings.tf_grid, settings.stirap_omega0, sweep_options);
      outcome.files.push_back(write_sweep(out_dir, r));
      summary.update(sweep_summary(r));
      extra["failures"] = failures_json(r);
      outcome.exit_code = sweep_exit_code(r);
      break;
    }
    case Command::Grid: {
      require_chosen_path(settings, "grid");
      const SystemConfig base = with_protocol(settings, Protocol::CStirsapChosenPath);
      const auto r = experiments::grid_gamma_time(base, settings.gamma_grid, settings.grid_tf, sweep_options);
      outcome.files.push_back(write_sweep(out_dir, r));
      summary.update(sweep_summary(r));
      extra["failures"] = failures_json(r);
      outcome.exit_code = sweep_exit_code(r);
      break;
    }
    case Command::Amplitudes: {
      const double gamma = kPi * settings.config.at("gamma_pi").get<double>();
      const auto r = experiments::amplitude_curve(gamma, settings.tf_grid, settings.delta_list);
      outcome.files.push_back(write_sweep(out_dir, r));
      summary.update(sweep_summary(r));
      extra["failures"] = failures_json(r);
      outcome.exit_code = sweep_exit_code(r);
      break;
    }
    case Command::RoundTrip: {
      require_chosen_path(settings, "roundtrip");
      const SystemConfig base = with_protocol(settings, Protocol::CStirsapChosenPath);
      std::optional<double> phase;
      if (settings.auto_steps) phase = dynamics::kDefaultPhasePerStep;
      const int steps_hint = settings.auto_steps ? dynamics::with_resolved_steps(base).steps : base.steps;
      const auto r = experiments::round_trip(base, {stride_for(steps_hint, settings.record_points / 2)}, phase);
      outcome.files.push_back(write_trajectory(out_dir, "trajectory.csv", r.trajectory));
      outcome.files.push_back(write_trajectory(out_dir, "trajectory_ideal.csv", r.ideal_trajectory));
      summary["protocol"] = to_string(Protocol::CStirsapChosenPath);
      summary["creation"] = num(r.creation_efficiency);
      summary["detection"] = num(r.detection_efficiency);
      summary["creation_squared"] = num(r.creation_efficiency * r.creation_efficiency);
      summary["ideal_detection"] = num(r.ideal_detection);
      summary["steps"] = r.base.steps;
      break;
    }
  }

  const fs::path summary_path = out_dir / "summary.json";
  write_text(summary_path, summary.dump(2) + "\n");
  outcome.files.push_back(summary_path);

  const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
  Json& manifest = outcome.manifest;
  manifest["command"] = to_string(command);
  Json resolved = settings.config;
  if (command == Command::Grid || command == Command::RoundTrip) resolved["protocol"] = "chosen-path";
  manifest["config"] = resolved;
  manifest["tool_version"] = kToolVersion;
  manifest["duration_s"] = num(seconds);
  manifest["exit_code"] = outcome.exit_code;
  manifest["outputs"] = Json::array();
  for (const auto& f : outcome.files) manifest["outputs"].push_back(f.filename().string());
  manifest["failures"] = extra.contains("failures") ? extra["failures"] : Json::array();
  const fs::path manifest_path = out_dir / "manifest.json";
  write_text(manifest_path, manifest.dump(2) + "\n");
  outcome.files.push_back(manifest_path);
  return outcome;
}

RunOutcome replay(const fs::path& manifest_path, const fs::path& out_dir, unsigned threads) {
  std::ifstream in(manifest_path);
  if (!in) throw ValidationError("cannot open manifest '" + manifest_path.string() + "'");
  Json manifest;
  try {
    manifest = Json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw ValidationError(std::string("manifest is not valid JSON: ") + e.what());
  }
  if (!manifest.contains("command") || !manifest.contains("config")) {
    throw ValidationError("manifest must contain 'command' and 'config'");
  }
  const RunSettings settings = parse_config(manifest.at("config"), Json::object());
  return run(command_from_string(manifest.at("command").get<std::string>()), settings, out_dir, threads);
}

}  // namespace cstirsap::cli
