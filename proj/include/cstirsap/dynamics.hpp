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

#include <functional>

#include "cstirsap/model.hpp"

/// Five-level Hamiltonian assembly and density-matrix propagation.
namespace cstirsap::dynamics {

/// Hermitian 5x5 Hamiltonian in rad/us: chainwise couplings on the first
/// off-diagonals, the detuning on levels 2 and 4, and an optional
/// +i Omega_cd / -i Omega_cd pair on the (1,5)/(5,1) corners.
class Hamiltonian5 {
 public:
  Hamiltonian5() : h_(Matrix5::Zero()) {}

  const Matrix5& matrix() const { return h_; }
  /// Max absolute row sum; bounds the spectral radius.
  double norm_bound() const;

 private:
  friend Hamiltonian5 assemble_h5(const FieldSample&, AngularFrequency, bool);
  Matrix5 h_;
};

Hamiltonian5 assemble_h5(const FieldSample& sample, AngularFrequency delta, bool with_cd);

/// d rho / dt = -i [H, rho] - Gamma rho, (Gamma rho)_mn = (G_m + G_n)/2 rho_mn.
Matrix5 liouville_rhs(const Matrix5& rho, const Hamiltonian5& h, const DecayRates& decay);

/// Largest dt * |H| accepted by the integrators, in radians.
inline constexpr double kMaxPhasePerStep = 0.1;

/// Field samples as a function of time measured from the window start.
using FieldSampler = std::function<FieldSample(double)>;

struct Window {
  FieldSampler fields;
  double duration_us = 0.0;
  int steps = 0;
  bool with_cd = false;
};

struct RecordOptions {
  /// Record every n-th step (the final step of a window is always recorded).
  int stride = 1;
  /// Called with (t, rho) at every recorded point.
  std::function<void(double, const Matrix5&)> observer;
};

/// Fixed-step classical RK4 over one window, appending to `out` with times
/// offset by `t0`. The initial point is recorded only if `out` is empty.
/// Throws ResolutionError when dt * |H| exceeds kMaxPhasePerStep.
DensityMatrix propagate(const DensityMatrix& initial, const Window& window, AngularFrequency delta,
                        const DecayRates& decay, double t0, const RecordOptions& record,
                        Trajectory& out);

/// Steps needed to keep dt * |H| below `phase_per_step` over a window,
/// sampled on a coarse grid. Never below kMinSteps.
int resolving_steps(const Window& window, AngularFrequency delta, double phase_per_step);

Window window_for(const SystemConfig& config);

/// Phase per step used when the step count is chosen automatically.
inline constexpr double kDefaultPhasePerStep = 0.08;

/// `config` with steps raised to max(config.steps, resolving_steps(...)).
SystemConfig with_resolved_steps(SystemConfig config, double phase_per_step = kDefaultPhasePerStep);

/// Liouville evolution of |1><1| over [0, tf] for `config`.
Trajectory evolve(const SystemConfig& config, const RecordOptions& record = {});

struct AmplitudeTrajectory {
  std::vector<double> times;
  std::vector<StateVector> amplitudes;
};

/// Schroedinger evolution of the pure state |1> with the same Hamiltonian
/// and grid as `evolve`; decay enters as -i Gamma/2 on the diagonal.
AmplitudeTrajectory evolve_amplitudes(const SystemConfig& config, const RecordOptions& record = {});

/// Final rho_55.
double transfer_efficiency(const Trajectory& trajectory);

}  // namespace cstirsap::dynamics
