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

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "cstirsap/dynamics.hpp"
#include "cstirsap/model.hpp"

/// Parameter sweeps and protocol compositions built on dynamics::evolve.
namespace cstirsap::experiments {

/// Gaussian counter-diabatic run: omega0 = 30 pi, tf = 1 us, sigma = tf/6,
/// tau = tf/10, delta = 2000 pi rad/us, molecular decay rates.
SystemConfig standard_cd_config();

/// Chosen-path creation with gamma = 0.3 pi, tf = 1 us and the given delta.
SystemConfig standard_chosen_path_config(AngularFrequency delta = AngularFrequency(2000.0 * kPi));

struct SweepAxis {
  std::string name;
  std::vector<double> values;
};

/// One curve or surface; values are row-major over the axes (last axis
/// fastest). Failed cells hold NaN.
struct SweepSeries {
  std::string label;
  std::vector<double> values;
};

struct SweepFailure {
  enum class Kind { Validation, Resolution, Other };
  Kind kind = Kind::Other;
  std::string series;
  std::size_t index = 0;
  std::string message;
};

struct SweepResult {
  std::vector<SweepAxis> axes;
  std::vector<SweepSeries> series;
  /// Name of the tabulated quantity ("efficiency" or "amplitude").
  std::string quantity = "efficiency";
  SystemConfig base;
  std::vector<SweepFailure> failures;

  std::size_t cell_count() const;
  const SweepSeries& get(const std::string& label) const;
  /// Multi-index for a flat cell index.
  std::vector<std::size_t> unravel(std::size_t flat) const;
};

struct SweepOptions {
  /// Worker threads; 0 uses the hardware concurrency.
  unsigned threads = 0;
  /// When set, each cell's step count is raised to resolve |H| dt at this
  /// phase; when empty, the scaled base step count is used verbatim.
  std::optional<double> phase_per_step = dynamics::kDefaultPhasePerStep;
};

/// Pairs of (counter-diabatic, plain chainwise STIRAP) efficiencies versus
/// omega0 (rad/us). Everything else is taken from `base`.
SweepResult sweep_rabi_amplitude(const SystemConfig& base, const std::vector<double>& omega0_grid,
                                 const SweepOptions& options = {});

/// Both protocols versus tf with sigma and tau rescaled in proportion to tf.
/// The counter-diabatic curve keeps base omega0; the plain STIRAP curve uses
/// `stirap_omega0`.
SweepResult sweep_operation_time(const SystemConfig& base, const std::vector<double>& tf_grid,
                                 AngularFrequency stirap_omega0 = AngularFrequency(125.0 * kPi),
                                 const SweepOptions& options = {});

/// Chosen-path efficiency over gamma (rad) x tf (us).
SweepResult grid_gamma_time(const SystemConfig& base, const std::vector<double>& gamma_grid,
                            const std::vector<double>& tf_grid, const SweepOptions& options = {});

/// max_t |modified Omega1| over tf x delta (rad/us) at fixed gamma, sampled on
/// `samples` + 1 equally spaced points of [0, tf].
SweepResult amplitude_curve(double gamma_rad, const std::vector<double>& tf_grid,
                            const std::vector<double>& delta_list, int samples = 20000);

struct RoundTripResult {
  double creation_efficiency = 0.0;
  double detection_efficiency = 0.0;
  double ideal_detection = 0.0;
  Trajectory trajectory;
  Trajectory ideal_trajectory;
  SystemConfig base;
};

/// Creation over [0, tf] followed by the detection schedule over
/// [tf, 2 tf], once with base decay rates and once without decay.
/// Both windows share one step count; see SweepOptions::phase_per_step.
RoundTripResult round_trip(const SystemConfig& base, const dynamics::RecordOptions& record = {},
                           std::optional<double> phase_per_step = dynamics::kDefaultPhasePerStep);

/// Exponent b of a least-squares fit y = a x^b in log-log space.
double fit_power_law(const std::vector<double>& x, const std::vector<double>& y);

/// Index of the largest finite value; throws if none is finite.
std::size_t argmax(const std::vector<double>& values);

std::vector<double> linspace(double first, double last, std::size_t count);
/// first, first + step, ... up to last (inclusive within step/1e6).
std::vector<double> arange(double first, double last, double step);

std::vector<double> default_omega0_grid();  // 10 pi .. 250 pi, step 5 pi
std::vector<double> default_tf_grid();      // 0.1 .. 2.0 us, step 0.05
std::vector<double> default_gamma_grid();   // 50 values, 0.001 pi .. 0.5 pi
std::vector<double> default_grid_tf();      // 50 values, 0.2 .. 2.0 us
std::vector<double> default_delta_list();   // 1000 pi, 1500 pi, 2000 pi rad/us

}  // namespace cstirsap::experiments
