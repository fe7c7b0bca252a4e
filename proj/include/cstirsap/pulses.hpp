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

/// Time-dependent control fields. Everything here is a pure function of the
/// parameters and the time t (us); derivatives are analytic.
namespace cstirsap::pulses {

struct GaussianPair {
  double omega2 = 0.0;
  double omega3 = 0.0;
};

/// Omega2 centred at tf/2 + tau, Omega3 at tf/2 - tau (Stokes-like Omega3
/// arrives first).
GaussianPair gaussian_pair(const PulseParams& p, double t);
GaussianPair gaussian_pair_rate(const PulseParams& p, double t);

/// Bridge amplitude assigned to both Omega1 and Omega4 so that the three
/// light shifts of the reduced system coincide.
double bridge_rabi(double omega2, double omega3);

/// Counter-diabatic coupling (dOmega2 Omega3 - dOmega3 Omega2) / (Omega2^2 + Omega3^2).
/// Independent of omega0.
double cd_field(const PulseParams& p, double t);

struct AngleSchedule {
  double mu = 0.0;
  double theta = 0.0;
  double mu_dot = 0.0;
  double theta_dot = 0.0;
};

/// mu(t) = gamma sin^2(pi t/tf); theta follows the polynomial-plus-sinusoid
/// ramp from 0 to pi/2 (creation) or pi/2 to pi (detection). t must lie in
/// [0, tf]; values within 1e-12 tf of the ends are clamped.
AngleSchedule chosen_path_angles(const ChosenPathParams& cp, double t);

struct EffectivePair {
  double pump = 0.0;
  double stokes = 0.0;
};

/// Modified effective pump/Stokes couplings that keep the reduced system on
/// the dressed state. Exactly (0, 0) where sin(mu) < 1e-12.
EffectivePair chosen_path_effective(const ChosenPathParams& cp, double t);
EffectivePair chosen_path_effective(const AngleSchedule& s);

struct ChainPulses {
  double omega1 = 0.0;
  double omega2 = 0.0;
  double omega3 = 0.0;
  double omega4 = 0.0;
};

/// Maps an effective (pump, stokes) pair back to four physical pulses that
/// reproduce it under adiabatic elimination, with Omega1 = Omega4 =
/// sqrt(Omega2^2 + Omega3^2). The realized effective couplings equal the
/// requested ones up to a global sign.
ChainPulses invert_ae(double pump, double stokes, AngularFrequency delta);

/// All physical fields of a protocol at time t within one window.
FieldSample sample_fields(Protocol protocol, const PulseSpec& spec, double t);

}  // namespace cstirsap::pulses
