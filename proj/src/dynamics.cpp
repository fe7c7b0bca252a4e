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

#include "cstirsap/dynamics.hpp"

#include <cmath>
#include <sstream>

#include "cstirsap/pulses.hpp"

namespace cstirsap::dynamics {

namespace {

Eigen::Matrix<double, 5, 5> decay_matrix(const DecayRates& decay) {
  Eigen::Matrix<double, 5, 5> g;
  for (int m = 0; m < 5; ++m) {
    for (int n = 0; n < 5; ++n) g(m, n) = 0.5 * (decay[m] + decay[n]);
  }
  return g;
}

void check_resolution(const Hamiltonian5& h, double dt, double t) {
  const double phase = h.norm_bound() * dt;
  if (phase > kMaxPhasePerStep) {
    std::ostringstream msg;
    msg << "integrator step too coarse at t = " << t << " us: |H| dt = " << phase
        << " rad exceeds " << kMaxPhasePerStep << " rad; increase steps";
    throw ResolutionError(msg.str());
  }
}

void record_point(Trajectory& out, double t, const Matrix5& rho, const FieldSample& f) {
  std::array<double, 5> p{};
  for (int j = 0; j < 5; ++j) p[j] = rho(j, j).real();
  out.times.push_back(t);
  out.populations.push_back(p);
  out.trace.push_back(rho.trace().real());
  out.fields.push_back(f);
}

void check_window(const Window& window) {
  if (!window.fields) throw ValidationError("window has no field sampler");
  if (!(window.duration_us > 0.0)) throw ValidationError("window duration must be > 0");
  if (window.steps < kMinSteps) {
    throw ResolutionError("steps must be >= " + std::to_string(kMinSteps));
  }
}

}  // namespace

double Hamiltonian5::norm_bound() const { return h_.cwiseAbs().rowwise().sum().maxCoeff(); }

Hamiltonian5 assemble_h5(const FieldSample& sample, AngularFrequency delta, bool with_cd) {
  Hamiltonian5 h;
  Matrix5& m = h.h_;
  m(0, 1) = m(1, 0) = sample.omega1;
  m(1, 2) = m(2, 1) = sample.omega2;
  m(2, 3) = m(3, 2) = sample.omega3;
  m(3, 4) = m(4, 3) = sample.omega4;
  m(1, 1) = m(3, 3) = delta.rad_per_us();
  if (with_cd) {
    m(0, 4) = Complex(0.0, sample.omega_cd);
    m(4, 0) = Complex(0.0, -sample.omega_cd);
  }
  return h;
}

Matrix5 liouville_rhs(const Matrix5& rho, const Hamiltonian5& h, const DecayRates& decay) {
  // For Hermitian rho and H, rho H = (H rho)^dagger.
  const Matrix5 product = h.matrix() * rho;
  return Complex(0.0, -1.0) * (product - product.adjoint()) -
         Matrix5(decay_matrix(decay).cast<Complex>().cwiseProduct(rho));
}

DensityMatrix propagate(const DensityMatrix& initial, const Window& window, AngularFrequency delta,
                        const DecayRates& decay, double t0, const RecordOptions& record,
                        Trajectory& out) {
  check_window(window);
  const int stride = std::max(1, record.stride);
  const int n = window.steps;
  const double dt = window.duration_us / n;
  const Matrix5 loss = decay_matrix(decay).cast<Complex>();
  const Complex minus_i(0.0, -1.0);

  auto rhs = [&](const Matrix5& rho, const Matrix5& hm) -> Matrix5 {
    const Matrix5 product = hm * rho;
    return minus_i * (product - product.adjoint()) - loss.cwiseProduct(rho);
  };

  Matrix5 rho = initial.matrix();
  FieldSample f_start = window.fields(0.0);
  Hamiltonian5 h_start = assemble_h5(f_start, delta, window.with_cd);
  check_resolution(h_start, dt, t0);
  if (out.empty()) {
    record_point(out, t0, rho, f_start);
    if (record.observer) record.observer(t0, rho);
  }

  for (int k = 0; k < n; ++k) {
    const double t = window.duration_us * k / n;
    const double t_next = window.duration_us * (k + 1) / n;
    const FieldSample f_mid = window.fields(0.5 * (t + t_next));
    const FieldSample f_end = window.fields(t_next);
    const Hamiltonian5 h_mid = assemble_h5(f_mid, delta, window.with_cd);
    const Hamiltonian5 h_end = assemble_h5(f_end, delta, window.with_cd);
    check_resolution(h_mid, dt, t0 + t);
    check_resolution(h_end, dt, t0 + t_next);

    const Matrix5& a = h_start.matrix();
    const Matrix5& b = h_mid.matrix();
    const Matrix5& c = h_end.matrix();
    const Matrix5 k1 = rhs(rho, a);
    const Matrix5 k2 = rhs(rho + (0.5 * dt) * k1, b);
    const Matrix5 k3 = rhs(rho + (0.5 * dt) * k2, b);
    const Matrix5 k4 = rhs(rho + dt * k3, c);
    rho += (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    rho = 0.5 * (rho + rho.adjoint()).eval();

    if ((k + 1) % stride == 0 || k + 1 == n) {
      record_point(out, t0 + t_next, rho, f_end);
      if (record.observer) record.observer(t0 + t_next, rho);
    }
    h_start = h_end;
  }
  return DensityMatrix(rho);
}

int resolving_steps(const Window& window, AngularFrequency delta, double phase_per_step) {
  constexpr int kProbe = 4000;
  double bound = 0.0;
  for (int i = 0; i <= kProbe; ++i) {
    const double t = window.duration_us * i / kProbe;
    bound = std::max(bound, assemble_h5(window.fields(t), delta, window.with_cd).norm_bound());
  }
  const double needed = std::ceil(window.duration_us * bound / phase_per_step);
  return std::max(kMinSteps, static_cast<int>(needed));
}

Window window_for(const SystemConfig& config) {
  Window w;
  const Protocol protocol = config.protocol;
  const PulseSpec spec = config.pulse;
  w.fields = [protocol, spec](double t) { return pulses::sample_fields(protocol, spec, t); };
  w.duration_us = config.window_us();
  w.steps = config.steps;
  w.with_cd = config.uses_cd();
  return w;
}

SystemConfig with_resolved_steps(SystemConfig config, double phase_per_step) {
  config.validate();
  config.steps = std::max(config.steps, resolving_steps(window_for(config), config.delta, phase_per_step));
  return config;
}

Trajectory evolve(const SystemConfig& config, const RecordOptions& record) {
  config.validate();
  Trajectory out;
  out.final_state = propagate(DensityMatrix::pure_level(0), window_for(config), config.delta,
                              config.decay, 0.0, record, out);
  return out;
}

AmplitudeTrajectory evolve_amplitudes(const SystemConfig& config, const RecordOptions& record) {
  config.validate();
  const Window w = window_for(config);
  check_window(w);
  const int stride = std::max(1, record.stride);
  const int n = w.steps;
  const double dt = w.duration_us / n;
  Matrix5 loss = Matrix5::Zero();
  for (int j = 0; j < 5; ++j) loss(j, j) = Complex(0.0, -0.5 * config.decay[j]);
  const Complex minus_i(0.0, -1.0);
  auto generator = [&](double t) -> Matrix5 {
    const Hamiltonian5 h = assemble_h5(w.fields(t), config.delta, w.with_cd);
    check_resolution(h, dt, t);
    return minus_i * (h.matrix() + loss);
  };

  AmplitudeTrajectory out;
  StateVector a = StateVector::Zero();
  a(0) = 1.0;
  out.times.push_back(0.0);
  out.amplitudes.push_back(a);
  Matrix5 g_start = generator(0.0);
  for (int k = 0; k < n; ++k) {
    const double t = w.duration_us * k / n;
    const double t_next = w.duration_us * (k + 1) / n;
    const Matrix5 g_mid = generator(0.5 * (t + t_next));
    const Matrix5 g_end = generator(t_next);
    const StateVector k1 = g_start * a;
    const StateVector k2 = g_mid * (a + (0.5 * dt) * k1);
    const StateVector k3 = g_mid * (a + (0.5 * dt) * k2);
    const StateVector k4 = g_end * (a + dt * k3);
    a += (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    if ((k + 1) % stride == 0 || k + 1 == n) {
      out.times.push_back(t_next);
      out.amplitudes.push_back(a);
    }
    g_start = g_end;
  }
  return out;
}

double transfer_efficiency(const Trajectory& trajectory) {
  if (trajectory.empty()) throw ValidationError("empty trajectory");
  return trajectory.populations.back()[4];
}

}  // namespace cstirsap::dynamics
