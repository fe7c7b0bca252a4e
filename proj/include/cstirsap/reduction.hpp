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

#include "cstirsap/model.hpp"
#include "cstirsap/pulses.hpp"

/// Adiabatic elimination of the excited levels 2 and 4: the effective
/// three-level (1, 3, 5) Lambda system, its validity margin, and the dark and
/// dressed states used for diagnostics.
namespace cstirsap::reduction {

/// Effective couplings and light shifts of the reduced system, rad/us.
struct EffectiveLambda {
  double pump = 0.0;    // 1 <-> 3
  double stokes = 0.0;  // 3 <-> 5
  double beta1 = 0.0;
  double beta3 = 0.0;
  double beta5 = 0.0;

  /// 3x3 Hamiltonian in the (1, 3, 5) basis, light shifts on the diagonal.
  Matrix3 matrix() const;
};

EffectiveLambda effective_hamiltonian(const pulses::ChainPulses& chain, AngularFrequency delta);

/// delta / max(sqrt(O1^2 + O2^2), sqrt(O3^2 + O4^2)); +inf without coupling.
/// A margin of 10 or more is treated as a valid elimination.
double ae_margin(const pulses::ChainPulses& chain, AngularFrequency delta);

inline constexpr double kValidMargin = 10.0;

/// (cos theta, 0, -sin theta) with tan theta = pump / stokes. Throws
/// ValidationError if both couplings vanish.
Vector3 dark_state(double pump, double stokes);

/// (cos mu cos theta, i sin mu, cos mu sin theta).
Vector3 dressed_path_state(const pulses::AngleSchedule& schedule);

struct EffectiveTrajectory {
  std::vector<double> times;
  std::vector<std::array<double, 3>> populations;
  std::vector<Vector3> amplitudes;
  /// Smallest elimination margin of the physical fields seen on the grid.
  double min_margin = 0.0;
};

/// Integrates the resonant reduced system from c = (1, 0, 0) on the same
/// grid as the five-level run for `config`. The common light shift is
/// dropped. Counter-diabatic runs add +-i Omega_cd on the (1,5) corners;
/// chosen-path runs use the modified couplings directly. No decay.
EffectiveTrajectory evolve_effective(const SystemConfig& config, int record_stride = 1);

}  // namespace cstirsap::reduction
