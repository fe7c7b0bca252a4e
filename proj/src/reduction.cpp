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

#include "cstirsap/reduction.hpp"

#include <cmath>
#include <iostream>
#include <limits>

namespace cstirsap::reduction {

Matrix3 EffectiveLambda::matrix() const {
  Matrix3 h = Matrix3::Zero();
  h(0, 0) = beta1;
  h(1, 1) = beta3;
  h(2, 2) = beta5;
  h(0, 1) = h(1, 0) = pump;
  h(1, 2) = h(2, 1) = stokes;
  return h;
}

EffectiveLambda effective_hamiltonian(const pulses::ChainPulses& c, AngularFrequency delta) {
  const double d = delta.rad_per_us();
  if (!(d > 0.0)) throw ValidationError("delta must be > 0");
  EffectiveLambda e;
  e.beta1 = -c.omega1 * c.omega1 / d;
  e.beta3 = -(c.omega2 * c.omega2 + c.omega3 * c.omega3) / d;
  e.beta5 = -c.omega4 * c.omega4 / d;
  e.pump = -c.omega1 * c.omega2 / d;
  e.stokes = -c.omega3 * c.omega4 / d;
  return e;
}

double ae_margin(const pulses::ChainPulses& c, AngularFrequency delta) {
  const double d = delta.rad_per_us();
  if (!(d > 0.0)) throw ValidationError("delta must be > 0");
  const double left = std::hypot(c.omega1, c.omega2);
  const double right = std::hypot(c.omega3, c.omega4);
  const double strongest = std::max(left, right);
  if (strongest == 0.0) return std::numeric_limits<double>::infinity();
  return d / strongest;
}

Vector3 dark_state(double pump, double stokes) {
  if (pump == 0.0 && stokes == 0.0) {
    throw ValidationError("dark state undefined when both effective couplings vanish");
  }
  const double theta = std::atan2(pump, stokes);
  return Vector3(std::cos(theta), 0.0, -std::sin(theta));
}

Vector3 dressed_path_state(const pulses::AngleSchedule& s) {
  const double cm = std::cos(s.mu);
  return Vector3(cm * std::cos(s.theta), Complex(0.0, std::sin(s.mu)), cm * std::sin(s.theta));
}

EffectiveTrajectory evolve_effective(const SystemConfig& config, int record_stride) {
  config.validate();
  const int n = config.steps;
  const double tf = config.window_us();
  const double dt = tf / n;
  const int stride = std::max(1, record_stride);
  const Complex minus_i(0.0, -1.0);

  EffectiveTrajectory out;
  out.min_margin = std::numeric_limits<double>::infinity();

  auto generator = [&](double t) -> Matrix3 {
    const FieldSample f = pulses::sample_fields(config.protocol, config.pulse, t);
    const pulses::ChainPulses chain{f.omega1, f.omega2, f.omega3, f.omega4};
    out.min_margin = std::min(out.min_margin, ae_margin(chain, config.delta));
    Matrix3 h = Matrix3::Zero();
    if (const auto* cp = std::get_if<ChosenPathParams>(&config.pulse)) {
      const auto eff = pulses::chosen_path_effective(*cp, t);
      h(0, 1) = h(1, 0) = eff.pump;
      h(1, 2) = h(2, 1) = eff.stokes;
    } else {
      const EffectiveLambda e = effective_hamiltonian(chain, config.delta);
      h(0, 1) = h(1, 0) = e.pump;
      h(1, 2) = h(2, 1) = e.stokes;
      if (config.uses_cd()) {
        h(0, 2) = Complex(0.0, f.omega_cd);
        h(2, 0) = Complex(0.0, -f.omega_cd);
      }
    }
    return minus_i * h;
  };

  auto record = [&](double t, const Vector3& c) {
    out.times.push_back(t);
    out.populations.push_back({std::norm(c(0)), std::norm(c(1)), std::norm(c(2))});
    out.amplitudes.push_back(c);
  };

  Vector3 c(1.0, 0.0, 0.0);
  record(0.0, c);
  Matrix3 g_start = generator(0.0);
  for (int k = 0; k < n; ++k) {
    const double t = tf * k / n;
    const double t_next = tf * (k + 1) / n;
    const Matrix3 g_mid = generator(0.5 * (t + t_next));
    const Matrix3 g_end = generator(t_next);
    const Vector3 k1 = g_start * c;
    const Vector3 k2 = g_mid * (c + (0.5 * dt) * k1);
    const Vector3 k3 = g_mid * (c + (0.5 * dt) * k2);
    const Vector3 k4 = g_end * (c + dt * k3);
    c += (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    if ((k + 1) % stride == 0 || k + 1 == n) record(t_next, c);
    g_start = g_end;
  }
  if (out.min_margin < 1.0) {
    std::clog << "cstirsap: warning: elimination margin " << out.min_margin
              << " < 1; the reduced model is not a faithful approximation\n";
  }
  return out;
}

}  // namespace cstirsap::reduction
