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

#include "cstirsap/pulses.hpp"

#include <algorithm>
#include <cmath>

namespace cstirsap::pulses {

namespace {

constexpr double kEndpointSinGuard = 1e-12;

double gaussian(double omega0, double centre, double sigma, double t) {
  const double x = (t - centre) / sigma;
  return omega0 * std::exp(-x * x);
}

}  // namespace

GaussianPair gaussian_pair(const PulseParams& p, double t) {
  const double mid = 0.5 * p.tf_us;
  const double w = p.omega0.rad_per_us();
  return {gaussian(w, mid + p.tau_us, p.sigma_us, t), gaussian(w, mid - p.tau_us, p.sigma_us, t)};
}

GaussianPair gaussian_pair_rate(const PulseParams& p, double t) {
  const double mid = 0.5 * p.tf_us;
  const double s2 = p.sigma_us * p.sigma_us;
  const auto [o2, o3] = gaussian_pair(p, t);
  return {-2.0 * (t - mid - p.tau_us) / s2 * o2, -2.0 * (t - mid + p.tau_us) / s2 * o3};
}

double bridge_rabi(double omega2, double omega3) { return std::hypot(omega2, omega3); }

double cd_field(const PulseParams& p, double t) {
  const auto [o2, o3] = gaussian_pair(p, t);
  const double norm = o2 * o2 + o3 * o3;
  if (norm > 1e-200) {
    const auto [d2, d3] = gaussian_pair_rate(p, t);
    return (d2 * o3 - d3 * o2) / norm;
  }
  // Both envelopes underflowed; use the log-ratio form of the same quotient,
  // (2 tau / sigma^2) sech(4 tau (t - tf/2) / sigma^2).
  const double s2 = p.sigma_us * p.sigma_us;
  const double arg = 4.0 * p.tau_us * (t - 0.5 * p.tf_us) / s2;
  return 2.0 * p.tau_us / s2 / std::cosh(arg);
}

AngleSchedule chosen_path_angles(const ChosenPathParams& cp, double t) {
  const double tf = cp.tf_us;
  const double slack = 1e-12 * tf;
  if (!(t >= -slack && t <= tf + slack)) {
    throw ValidationError("chosen-path schedule evaluated outside [0, tf]");
  }
  t = std::clamp(t, 0.0, tf);
  const double x = t / tf;
  const double s = std::sin(kPi * x);
  const double s2 = s * s;

  AngleSchedule a;
  a.mu = cp.gamma_rad * s2;
  a.mu_dot = cp.gamma_rad * kPi / tf * std::sin(2.0 * kPi * x);
  a.theta = 0.5 * kPi * x - std::sin(2.0 * kPi * x) / 3.0 + std::sin(4.0 * kPi * x) / 24.0;
  if (cp.phase == Phase::Detection) a.theta += 0.5 * kPi;
  // d/dt of the theta ramp collapses to (4 pi / 3 tf) sin^4(pi t / tf),
  // which avoids the cancellation of the three-term form near the ends.
  a.theta_dot = 4.0 * kPi / (3.0 * tf) * s2 * s2;
  return a;
}

EffectivePair chosen_path_effective(const AngleSchedule& s) {
  const double sin_mu = std::sin(s.mu);
  // Both terms vanish in the endpoint limit. Returning the exact zero keeps
  // round-off in mu_dot from being amplified by the square roots of invert_ae.
  if (std::abs(sin_mu) < kEndpointSinGuard) return {};
  const double st = std::sin(s.theta);
  const double ct = std::cos(s.theta);
  const double rate_cot = s.theta_dot * std::cos(s.mu) / sin_mu;
  return {-rate_cot * st - s.mu_dot * ct, rate_cot * ct - s.mu_dot * st};
}

EffectivePair chosen_path_effective(const ChosenPathParams& cp, double t) {
  return chosen_path_effective(chosen_path_angles(cp, t));
}

ChainPulses invert_ae(double pump, double stokes, AngularFrequency delta) {
  const double d = delta.rad_per_us();
  if (!(d > 0.0)) throw ValidationError("delta must be > 0");
  const double s = std::hypot(pump, stokes);  // sqrt(S)
  if (s == 0.0) return {};
  const double scale = std::sqrt(d / s);  // (delta^2 / S)^(1/4)
  const double bridge = std::sqrt(d * s);  // (delta^2 S)^(1/4)
  return {bridge, pump * scale, stokes * scale, bridge};
}

FieldSample sample_fields(Protocol protocol, const PulseSpec& spec, double t) {
  FieldSample f;
  if (const auto* cp = std::get_if<ChosenPathParams>(&spec)) {
    const auto eff = chosen_path_effective(*cp, t);
    const auto chain = invert_ae(eff.pump, eff.stokes, cp->delta);
    f.omega1 = chain.omega1;
    f.omega2 = chain.omega2;
    f.omega3 = chain.omega3;
    f.omega4 = chain.omega4;
    return f;
  }
  const auto& p = std::get<PulseParams>(spec);
  const auto [o2, o3] = gaussian_pair(p, t);
  f.omega2 = o2;
  f.omega3 = o3;
  f.omega1 = f.omega4 = bridge_rabi(o2, o3);
  if (protocol == Protocol::CStirsapCd) f.omega_cd = cd_field(p, t);
  return f;
}

}  // namespace cstirsap::pulses
