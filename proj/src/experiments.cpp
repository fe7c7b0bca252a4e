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

#include "cstirsap/experiments.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <functional>
#include <limits>
#include <optional>
#include <thread>

#include "cstirsap/pulses.hpp"

namespace cstirsap::experiments {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

void run_parallel(std::size_t count, unsigned threads, const std::function<void(std::size_t)>& task) {
  unsigned workers = threads == 0 ? std::max(1u, std::thread::hardware_concurrency()) : threads;
  workers = static_cast<unsigned>(std::min<std::size_t>(workers, count));
  if (workers <= 1) {
    for (std::size_t i = 0; i < count; ++i) task(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (unsigned w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      for (std::size_t i = next++; i < count; i = next++) task(i);
    });
  }
  for (auto& t : pool) t.join();
}

struct CellJob {
  std::string series;
  std::size_t index = 0;
  SystemConfig config;
};

/// Evaluates every job's transfer efficiency; failures become NaN cells.
void evaluate(const std::vector<CellJob>& jobs, const SweepOptions& options, SweepResult& result) {
  std::vector<double> values(jobs.size(), kNaN);
  std::vector<std::optional<SweepFailure>> errors(jobs.size());
  run_parallel(jobs.size(), options.threads, [&](std::size_t i) {
    try {
      const SystemConfig cfg = options.phase_per_step
                                   ? dynamics::with_resolved_steps(jobs[i].config, *options.phase_per_step)
                                   : jobs[i].config;
      const Trajectory tr = dynamics::evolve(cfg, {cfg.steps});
      const double eff = dynamics::transfer_efficiency(tr);
      if (!std::isfinite(eff)) throw ResolutionError("non-finite efficiency");
      values[i] = eff;
    } catch (const ValidationError& e) {
      errors[i] = SweepFailure{SweepFailure::Kind::Validation, jobs[i].series, jobs[i].index, e.what()};
    } catch (const ResolutionError& e) {
      errors[i] = SweepFailure{SweepFailure::Kind::Resolution, jobs[i].series, jobs[i].index, e.what()};
    } catch (const std::exception& e) {
      errors[i] = SweepFailure{SweepFailure::Kind::Other, jobs[i].series, jobs[i].index, e.what()};
    }
  });
  for (std::size_t i = 0; i < jobs.size(); ++i) {
    auto it = std::find_if(result.series.begin(), result.series.end(),
                           [&](const SweepSeries& s) { return s.label == jobs[i].series; });
    it->values[jobs[i].index] = values[i];
    if (errors[i]) result.failures.push_back(*errors[i]);
  }
}

const PulseParams& gaussian_params(const SystemConfig& base) {
  const auto* p = std::get_if<PulseParams>(&base.pulse);
  if (!p) throw ValidationError("sweep requires Gaussian pulse parameters");
  return *p;
}

void require_grid(const std::vector<double>& grid, const char* name) {
  if (grid.empty()) throw ValidationError(std::string(name) + " grid must not be empty");
}

}  // namespace

SystemConfig standard_cd_config() {
  SystemConfig c;
  c.delta = unit_convert(2.0, FrequencyUnit::PiGHz);
  c.decay = DecayRates::molecular_defaults();
  c.protocol = Protocol::CStirsapCd;
  c.pulse = PulseParams::standard(unit_convert(30.0, FrequencyUnit::PiMHz), 1.0);
  return c;
}

SystemConfig standard_chosen_path_config(AngularFrequency delta) {
  SystemConfig c;
  c.delta = delta;
  c.decay = DecayRates::molecular_defaults();
  c.protocol = Protocol::CStirsapChosenPath;
  c.pulse = ChosenPathParams{0.3 * kPi, 1.0, Phase::Creation, delta};
  return c;
}

std::size_t SweepResult::cell_count() const {
  std::size_t n = 1;
  for (const auto& a : axes) n *= a.values.size();
  return n;
}

const SweepSeries& SweepResult::get(const std::string& label) const {
  for (const auto& s : series) {
    if (s.label == label) return s;
  }
  throw std::out_of_range("no sweep series named '" + label + "'");
}

std::vector<std::size_t> SweepResult::unravel(std::size_t flat) const {
  std::vector<std::size_t> idx(axes.size());
  for (std::size_t k = axes.size(); k-- > 0;) {
    const std::size_t n = axes[k].values.size();
    idx[k] = flat % n;
    flat /= n;
  }
  return idx;
}

SweepResult sweep_rabi_amplitude(const SystemConfig& base, const std::vector<double>& omega0_grid,
                                 const SweepOptions& options) {
  require_grid(omega0_grid, "omega0");
  const PulseParams& p0 = gaussian_params(base);
  SweepResult result;
  result.base = base;
  result.axes = {{"omega0", omega0_grid}};
  result.series = {{to_string(Protocol::CStirsapCd), std::vector<double>(omega0_grid.size(), kNaN)},
                   {to_string(Protocol::CStirap), std::vector<double>(omega0_grid.size(), kNaN)}};
  std::vector<CellJob> jobs;
  for (Protocol protocol : {Protocol::CStirsapCd, Protocol::CStirap}) {
    for (std::size_t i = 0; i < omega0_grid.size(); ++i) {
      SystemConfig c = base;
      c.protocol = protocol;
      PulseParams p = p0;
      p.omega0 = AngularFrequency(omega0_grid[i]);
      c.pulse = p;
      jobs.push_back({to_string(protocol), i, c});
    }
  }
  evaluate(jobs, options, result);
  return result;
}

SweepResult sweep_operation_time(const SystemConfig& base, const std::vector<double>& tf_grid,
                                 AngularFrequency stirap_omega0, const SweepOptions& options) {
  require_grid(tf_grid, "tf");
  const PulseParams& p0 = gaussian_params(base);
  const double sigma_frac = p0.sigma_us / p0.tf_us;
  const double tau_frac = p0.tau_us / p0.tf_us;
  SweepResult result;
  result.base = base;
  result.axes = {{"tf_us", tf_grid}};
  result.series = {{to_string(Protocol::CStirsapCd), std::vector<double>(tf_grid.size(), kNaN)},
                   {to_string(Protocol::CStirap), std::vector<double>(tf_grid.size(), kNaN)}};
  std::vector<CellJob> jobs;
  for (Protocol protocol : {Protocol::CStirsapCd, Protocol::CStirap}) {
    for (std::size_t i = 0; i < tf_grid.size(); ++i) {
      const double tf = tf_grid[i];
      SystemConfig c = base;
      c.protocol = protocol;
      const AngularFrequency omega0 = protocol == Protocol::CStirap ? stirap_omega0 : p0.omega0;
      c.pulse = PulseParams{omega0, sigma_frac * tf, tau_frac * tf, tf};
      c.steps = std::max(kMinSteps, static_cast<int>(std::lround(base.steps * tf / p0.tf_us)));
      jobs.push_back({to_string(protocol), i, c});
    }
  }
  evaluate(jobs, options, result);
  return result;
}

SweepResult grid_gamma_time(const SystemConfig& base, const std::vector<double>& gamma_grid,
                            const std::vector<double>& tf_grid, const SweepOptions& options) {
  require_grid(gamma_grid, "gamma");
  require_grid(tf_grid, "tf");
  const auto* cp0 = std::get_if<ChosenPathParams>(&base.pulse);
  if (!cp0) throw ValidationError("gamma/tf grid requires the chosen-path protocol");
  for (double g : gamma_grid) {
    if (!(g > 0.0)) throw ValidationError("gamma grid must exclude zero (gamma must not be zero)");
  }
  const std::string label = to_string(Protocol::CStirsapChosenPath);
  SweepResult result;
  result.base = base;
  result.axes = {{"gamma", gamma_grid}, {"tf_us", tf_grid}};
  result.series = {{label, std::vector<double>(gamma_grid.size() * tf_grid.size(), kNaN)}};
  std::vector<CellJob> jobs;
  for (std::size_t i = 0; i < gamma_grid.size(); ++i) {
    for (std::size_t j = 0; j < tf_grid.size(); ++j) {
      SystemConfig c = base;
      ChosenPathParams cp = *cp0;
      cp.gamma_rad = gamma_grid[i];
      cp.tf_us = tf_grid[j];
      c.pulse = cp;
      c.steps = std::max(kMinSteps, static_cast<int>(std::lround(base.steps * cp.tf_us / cp0->tf_us)));
      jobs.push_back({label, i * tf_grid.size() + j, c});
    }
  }
  evaluate(jobs, options, result);
  return result;
}

SweepResult amplitude_curve(double gamma_rad, const std::vector<double>& tf_grid,
                            const std::vector<double>& delta_list, int samples) {
  require_grid(tf_grid, "tf");
  require_grid(delta_list, "delta");
  if (samples < 2) throw ValidationError("amplitude sampling needs at least 2 intervals");
  SweepResult result;
  result.quantity = "amplitude";
  result.base = standard_chosen_path_config(AngularFrequency(delta_list.front()));
  result.axes = {{"tf_us", tf_grid}, {"delta", delta_list}};
  result.series = {{"omega1_max", std::vector<double>(tf_grid.size() * delta_list.size(), kNaN)}};
  for (std::size_t i = 0; i < tf_grid.size(); ++i) {
    for (std::size_t j = 0; j < delta_list.size(); ++j) {
      const std::size_t cell = i * delta_list.size() + j;
      try {
        const ChosenPathParams cp{gamma_rad, tf_grid[i], Phase::Creation, AngularFrequency(delta_list[j])};
        cp.validate();
        double peak = 0.0;
        for (int k = 0; k <= samples; ++k) {
          const auto eff = pulses::chosen_path_effective(cp, cp.tf_us * k / samples);
          peak = std::max(peak, std::abs(pulses::invert_ae(eff.pump, eff.stokes, cp.delta).omega1));
        }
        result.series[0].values[cell] = peak;
      } catch (const ValidationError& e) {
        result.failures.push_back({SweepFailure::Kind::Validation, result.series[0].label, cell, e.what()});
      }
    }
  }
  return result;
}

RoundTripResult round_trip(const SystemConfig& base, const dynamics::RecordOptions& record,
                           std::optional<double> phase_per_step) {
  base.validate();
  const auto* create = std::get_if<ChosenPathParams>(&base.pulse);
  if (!create || base.protocol != Protocol::CStirsapChosenPath) {
    throw ValidationError("round trip requires the chosen-path protocol");
  }
  ChosenPathParams creation = *create;
  creation.phase = Phase::Creation;
  ChosenPathParams detection = creation;
  detection.phase = Phase::Detection;

  dynamics::Window first;
  first.fields = [creation](double t) {
    return pulses::sample_fields(Protocol::CStirsapChosenPath, creation, t);
  };
  first.duration_us = creation.tf_us;
  first.steps = base.steps;
  dynamics::Window second = first;
  second.fields = [detection](double t) {
    return pulses::sample_fields(Protocol::CStirsapChosenPath, detection, t);
  };
  int steps = base.steps;
  if (phase_per_step) {
    steps = std::max({steps, dynamics::resolving_steps(first, base.delta, *phase_per_step),
                      dynamics::resolving_steps(second, base.delta, *phase_per_step)});
  }
  first.steps = second.steps = steps;

  RoundTripResult result;
  result.base = base;
  result.base.steps = steps;
  auto run = [&](const DecayRates& decay, Trajectory& out, double& created) {
    const DensityMatrix mid =
        dynamics::propagate(DensityMatrix::pure_level(0), first, base.delta, decay, 0.0, record, out);
    created = mid.population(4);
    out.final_state = dynamics::propagate(mid, second, base.delta, decay, creation.tf_us, record, out);
    return out.final_state.population(0);
  };
  result.detection_efficiency = run(base.decay, result.trajectory, result.creation_efficiency);
  double ideal_created = 0.0;
  result.ideal_detection = run(DecayRates::none(), result.ideal_trajectory, ideal_created);
  return result;
}

double fit_power_law(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size() || x.size() < 2) throw ValidationError("power-law fit needs >= 2 paired points");
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (!(x[i] > 0.0) || !(y[i] > 0.0)) throw ValidationError("power-law fit needs positive data");
    const double lx = std::log(x[i]);
    const double ly = std::log(y[i]);
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
  }
  const double n = static_cast<double>(x.size());
  const double denom = n * sxx - sx * sx;
  if (denom == 0.0) throw ValidationError("power-law fit needs distinct x values");
  return (n * sxy - sx * sy) / denom;
}

std::size_t argmax(const std::vector<double>& values) {
  std::optional<std::size_t> best;
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (std::isfinite(values[i]) && (!best || values[i] > values[*best])) best = i;
  }
  if (!best) throw ValidationError("no finite values");
  return *best;
}

std::vector<double> linspace(double first, double last, std::size_t count) {
  std::vector<double> v(count);
  if (count == 1) {
    v[0] = first;
    return v;
  }
  for (std::size_t i = 0; i < count; ++i) {
    v[i] = first + (last - first) * static_cast<double>(i) / static_cast<double>(count - 1);
  }
  return v;
}

std::vector<double> arange(double first, double last, double step) {
  if (!(step > 0.0)) throw ValidationError("grid step must be > 0");
  std::vector<double> v;
  for (std::size_t i = 0;; ++i) {
    const double x = first + step * static_cast<double>(i);
    if (x > last + step * 1e-6) break;
    v.push_back(x);
  }
  return v;
}

std::vector<double> default_omega0_grid() { return arange(10.0 * kPi, 250.0 * kPi, 5.0 * kPi); }
std::vector<double> default_tf_grid() { return arange(0.1, 2.0, 0.05); }
std::vector<double> default_gamma_grid() { return linspace(0.001 * kPi, 0.5 * kPi, 50); }
std::vector<double> default_grid_tf() { return linspace(0.2, 2.0, 50); }
std::vector<double> default_delta_list() { return {1000.0 * kPi, 1500.0 * kPi, 2000.0 * kPi}; }

}  // namespace cstirsap::experiments
