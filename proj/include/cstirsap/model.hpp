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

#include <array>
#include <complex>
#include <compare>
#include <numbers>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include <Eigen/Dense>

/// Shared domain types for the five-level chainwise (M-type) system.
///
/// Unit system: time in microseconds, every frequency-like quantity (Rabi
/// frequency, detuning, decay rate) as an angular frequency in rad/us with
/// hbar = 1. A value quoted as "X MHz" maps to X rad/us.
namespace cstirsap {

using Complex = std::complex<double>;
using Matrix5 = Eigen::Matrix<Complex, 5, 5>;
using StateVector = Eigen::Matrix<Complex, 5, 1>;
using Matrix3 = Eigen::Matrix<Complex, 3, 3>;
using Vector3 = Eigen::Matrix<Complex, 3, 1>;

inline constexpr double kPi = std::numbers::pi;

/// Raised when a parameter violates a documented invariant.
class ValidationError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Raised when the integrator grid cannot resolve the dynamics.
class ResolutionError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class AngularFrequency {
 public:
  constexpr AngularFrequency() = default;
  constexpr explicit AngularFrequency(double rad_per_us) : value_(rad_per_us) {}

  constexpr double rad_per_us() const { return value_; }

  friend constexpr AngularFrequency operator+(AngularFrequency a, AngularFrequency b) {
    return AngularFrequency(a.value_ + b.value_);
  }
  friend constexpr AngularFrequency operator-(AngularFrequency a, AngularFrequency b) {
    return AngularFrequency(a.value_ - b.value_);
  }
  friend constexpr AngularFrequency operator*(double s, AngularFrequency a) {
    return AngularFrequency(s * a.value_);
  }
  friend constexpr AngularFrequency operator*(AngularFrequency a, double s) {
    return AngularFrequency(s * a.value_);
  }
  constexpr auto operator<=>(const AngularFrequency&) const = default;

 private:
  double value_ = 0.0;
};

enum class FrequencyUnit { MHz, GHz, PiMHz, PiGHz };

/// X MHz -> X rad/us, X GHz -> 1000 X rad/us; the Pi variants carry an extra
/// factor of pi. Throws ValidationError on non-finite input.
AngularFrequency unit_convert(double value, FrequencyUnit unit);

/// Gaussian pump/Stokes pair parameters. Times in us.
struct PulseParams {
  AngularFrequency omega0;
  double sigma_us = 0.0;
  double tau_us = 0.0;
  double tf_us = 0.0;

  /// Pulse family with sigma = tf/6 and tau = tf/10.
  static PulseParams standard(AngularFrequency omega0, double tf_us);

  void validate() const;
};

enum class Phase { Creation, Detection };

/// Dressed-path schedule parameters. gamma is the peak of mu(t) in radians;
/// delta is the detuning used to map effective couplings back onto the
/// four physical pulses.
struct ChosenPathParams {
  double gamma_rad = 0.0;
  double tf_us = 0.0;
  Phase phase = Phase::Creation;
  AngularFrequency delta;

  void validate() const;
};

/// Population loss rates out of the system for levels 1..5, rad/us.
class DecayRates {
 public:
  DecayRates() = default;
  explicit DecayRates(const std::array<double, 5>& rates);

  /// Rb2 rates: (0.01, 30, 0.06, 30, 0).
  static DecayRates molecular_defaults();
  static DecayRates none() { return DecayRates(); }

  double operator[](std::size_t level) const { return rates_[level]; }
  const std::array<double, 5>& values() const { return rates_; }
  bool any() const;

  bool operator==(const DecayRates&) const = default;

 private:
  std::array<double, 5> rates_{};
};

enum class Protocol { CStirap, CStirsapCd, CStirsapChosenPath };

std::string to_string(Protocol protocol);
Protocol protocol_from_string(const std::string& name);

using PulseSpec = std::variant<PulseParams, ChosenPathParams>;

struct SystemConfig {
  AngularFrequency delta;
  DecayRates decay;
  Protocol protocol = Protocol::CStirsapCd;
  PulseSpec pulse;
  int steps = 20000;

  /// Length of one integration window [0, tf] in us.
  double window_us() const;
  bool uses_cd() const { return protocol == Protocol::CStirsapCd; }

  /// Throws ValidationError, or ResolutionError when steps < kMinSteps.
  void validate() const;
};

inline constexpr int kMinSteps = 1000;

/// 5x5 density matrix. Hermiticity is enforced on construction.
class DensityMatrix {
 public:
  DensityMatrix() : rho_(Matrix5::Zero()) {}
  explicit DensityMatrix(const Matrix5& rho);

  /// |level><level| for a 0-based level index.
  static DensityMatrix pure_level(int level);
  static DensityMatrix from_state(const StateVector& amplitudes);

  const Matrix5& matrix() const { return rho_; }
  double population(int level) const { return rho_(level, level).real(); }
  double trace() const { return rho_.trace().real(); }
  std::array<double, 5> populations() const;

 private:
  Matrix5 rho_;
};

struct FieldSample {
  double omega1 = 0.0;
  double omega2 = 0.0;
  double omega3 = 0.0;
  double omega4 = 0.0;
  double omega_cd = 0.0;
};

/// Recorded time series. populations[k][j] is rho_jj at times[k].
struct Trajectory {
  std::vector<double> times;
  std::vector<std::array<double, 5>> populations;
  std::vector<double> trace;
  std::vector<FieldSample> fields;
  DensityMatrix final_state;

  std::size_t size() const { return times.size(); }
  bool empty() const { return times.empty(); }
};

}  // namespace cstirsap
