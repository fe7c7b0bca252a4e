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

#include "cstirsap/model.hpp"

#include <cmath>
#include <sstream>

namespace cstirsap {

namespace {

void require(bool ok, const std::string& rule) {
  if (!ok) throw ValidationError(rule);
}

}  // namespace

AngularFrequency unit_convert(double value, FrequencyUnit unit) {
  require(std::isfinite(value), "frequency value must be finite");
  switch (unit) {
    case FrequencyUnit::MHz:
      return AngularFrequency(value);
    case FrequencyUnit::GHz:
      return AngularFrequency(1000.0 * value);
    case FrequencyUnit::PiMHz:
      return AngularFrequency(kPi * value);
    case FrequencyUnit::PiGHz:
      return AngularFrequency(1000.0 * kPi * value);
  }
  throw ValidationError("unknown frequency unit");
}

PulseParams PulseParams::standard(AngularFrequency omega0, double tf_us) {
  return PulseParams{omega0, tf_us / 6.0, tf_us / 10.0, tf_us};
}

void PulseParams::validate() const {
  require(std::isfinite(omega0.rad_per_us()) && omega0.rad_per_us() > 0.0, "omega0 must be > 0");
  require(std::isfinite(sigma_us) && sigma_us > 0.0, "sigma must be > 0");
  require(std::isfinite(tf_us) && tf_us > 0.0, "tf must be > 0");
  require(std::isfinite(tau_us) && tau_us >= 0.0 && tau_us < tf_us / 2.0, "tau must satisfy 0 <= tau < tf/2");
}

void ChosenPathParams::validate() const {
  require(std::isfinite(gamma_rad) && gamma_rad != 0.0, "gamma must not be zero");
  require(gamma_rad > 0.0 && gamma_rad <= kPi / 2.0, "gamma must satisfy 0 < gamma <= pi/2");
  require(std::isfinite(tf_us) && tf_us > 0.0, "tf must be > 0");
  require(std::isfinite(delta.rad_per_us()) && delta.rad_per_us() > 0.0, "chosen-path delta must be > 0");
}

DecayRates::DecayRates(const std::array<double, 5>& rates) : rates_(rates) {
  for (double g : rates_) require(std::isfinite(g) && g >= 0.0, "decay rates must be >= 0");
}

DecayRates DecayRates::molecular_defaults() {
  return DecayRates({0.01, 30.0, 0.06, 30.0, 0.0});
}

bool DecayRates::any() const {
  for (double g : rates_) {
    if (g > 0.0) return true;
  }
  return false;
}

std::string to_string(Protocol protocol) {
  switch (protocol) {
    case Protocol::CStirap:
      return "stirap";
    case Protocol::CStirsapCd:
      return "cd";
    case Protocol::CStirsapChosenPath:
      return "chosen-path";
  }
  return "unknown";
}

Protocol protocol_from_string(const std::string& name) {
  if (name == "stirap" || name == "c-stirap") return Protocol::CStirap;
  if (name == "cd" || name == "counter-diabatic") return Protocol::CStirsapCd;
  if (name == "chosen-path" || name == "chosen_path") return Protocol::CStirsapChosenPath;
  throw ValidationError("unknown protocol '" + name + "' (expected stirap, cd or chosen-path)");
}

double SystemConfig::window_us() const {
  return std::visit([](const auto& p) { return p.tf_us; }, pulse);
}

void SystemConfig::validate() const {
  require(std::isfinite(delta.rad_per_us()) && delta.rad_per_us() > 0.0, "delta must be > 0");
  if (steps < kMinSteps) throw ResolutionError("steps must be >= " + std::to_string(kMinSteps));
  const bool chosen = std::holds_alternative<ChosenPathParams>(pulse);
  require(chosen == (protocol == Protocol::CStirsapChosenPath),
          "chosen-path protocol requires chosen-path parameters and vice versa");
  std::visit([](const auto& p) { p.validate(); }, pulse);
}

DensityMatrix::DensityMatrix(const Matrix5& rho) : rho_(0.5 * (rho + rho.adjoint())) {}

DensityMatrix DensityMatrix::pure_level(int level) {
  require(level >= 0 && level < 5, "level index out of range");
  Matrix5 rho = Matrix5::Zero();
  rho(level, level) = 1.0;
  return DensityMatrix(rho);
}

DensityMatrix DensityMatrix::from_state(const StateVector& amplitudes) {
  return DensityMatrix(Matrix5(amplitudes * amplitudes.adjoint()));
}

std::array<double, 5> DensityMatrix::populations() const {
  std::array<double, 5> p{};
  for (int j = 0; j < 5; ++j) p[j] = rho_(j, j).real();
  return p;
}

}  // namespace cstirsap
