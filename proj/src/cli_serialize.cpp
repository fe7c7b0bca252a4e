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

#include <cmath>
#include <cstdio>
#include <istream>
#include <ostream>
#include <sstream>

#include "cstirsap/cli.hpp"

namespace cstirsap::cli {

namespace {

constexpr const char* kTrajectoryHeader =
    "t_us,p1,p2,p3,p4,p5,trace,omega1,omega2,omega3,omega4,omega_cd";

std::vector<std::string> split(const std::string& line) {
  std::vector<std::string> cells;
  std::stringstream ss(line);
  for (std::string cell; std::getline(ss, cell, ',');) cells.push_back(cell);
  return cells;
}

double parse_number(const std::string& text) {
  if (text == "nan") return std::nan("");
  if (text == "inf") return HUGE_VAL;
  if (text == "-inf") return -HUGE_VAL;
  std::size_t used = 0;
  const double x = std::stod(text, &used);
  if (used != text.size()) throw ValidationError("malformed number '" + text + "'");
  return x;
}

/// Column name and display scale for a sweep axis.
std::pair<std::string, double> axis_column(const std::string& axis) {
  if (axis == "omega0") return {"omega0_pi_mhz", 1.0 / kPi};
  if (axis == "gamma") return {"gamma_pi", 1.0 / kPi};
  if (axis == "delta") return {"delta_pi_ghz", 1.0 / (1000.0 * kPi)};
  return {axis, 1.0};
}

}  // namespace

std::string format_number(double value) {
  if (std::isnan(value)) return "nan";
  if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.12g", value);
  return buf;
}

double round_to_precision(double value) {
  if (!std::isfinite(value)) return value;
  return std::stod(format_number(value));
}

void write_trajectory_csv(std::ostream& out, const Trajectory& tr) {
  out << kTrajectoryHeader << '\n';
  for (std::size_t k = 0; k < tr.size(); ++k) {
    const auto& p = tr.populations[k];
    const auto& f = tr.fields[k];
    out << format_number(tr.times[k]);
    for (double x : p) out << ',' << format_number(x);
    out << ',' << format_number(tr.trace[k]) << ',' << format_number(f.omega1) << ','
        << format_number(f.omega2) << ',' << format_number(f.omega3) << ',' << format_number(f.omega4)
        << ',' << format_number(f.omega_cd) << '\n';
  }
}

Trajectory read_trajectory_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line) || line != kTrajectoryHeader) {
    throw ValidationError("trajectory CSV header mismatch");
  }
  Trajectory tr;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const auto cells = split(line);
    if (cells.size() != 12) throw ValidationError("trajectory CSV row must have 12 columns");
    std::array<double, 12> v{};
    for (std::size_t i = 0; i < 12; ++i) v[i] = parse_number(cells[i]);
    tr.times.push_back(v[0]);
    tr.populations.push_back({v[1], v[2], v[3], v[4], v[5]});
    tr.trace.push_back(v[6]);
    tr.fields.push_back({v[7], v[8], v[9], v[10], v[11]});
  }
  return tr;
}

void write_sweep_csv(std::ostream& out, const experiments::SweepResult& result) {
  const bool amplitude = result.quantity == "amplitude";
  const char* value_column = amplitude ? "amplitude_pi_mhz" : "efficiency";
  const double value_scale = amplitude ? 1.0 / kPi : 1.0;
  out << (amplitude ? "series" : "protocol");
  for (const auto& a : result.axes) out << ',' << axis_column(a.name).first;
  out << ',' << value_column << '\n';
  for (const auto& series : result.series) {
    for (std::size_t cell = 0; cell < result.cell_count(); ++cell) {
      const auto idx = result.unravel(cell);
      out << series.label;
      for (std::size_t k = 0; k < result.axes.size(); ++k) {
        const auto [name, scale] = axis_column(result.axes[k].name);
        out << ',' << format_number(result.axes[k].values[idx[k]] * scale);
      }
      out << ',' << format_number(series.values[cell] * value_scale) << '\n';
    }
  }
}

}  // namespace cstirsap::cli
