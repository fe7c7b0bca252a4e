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

// Acceptance run: one PASS/FAIL line per criterion. Exit status is the
// number of failed criteria.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <functional>
#include <string>
#include <vector>

#include "cstirsap/dynamics.hpp"
#include "cstirsap/experiments.hpp"
#include "cstirsap/pulses.hpp"
#include "cstirsap/reduction.hpp"

using namespace cstirsap;
namespace ex = cstirsap::experiments;

namespace {

const double pi = kPi;
int failures = 0;

void report(int id, const std::string& name, bool ok, const std::string& detail) {
  std::printf("%s  criterion %d  %s: %s\n", ok ? "PASS" : "FAIL", id, name.c_str(), detail.c_str());
  std::fflush(stdout);
  if (!ok) ++failures;
}

std::string fmt(const char* f, double a, double b = 0, double c = 0, double d = 0, double e = 0) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, a, b, c, d, e);
  return buf;
}

SystemConfig fig2(Protocol protocol, bool decay = true) {
  SystemConfig c = ex::standard_cd_config();
  c.protocol = protocol;
  if (!decay) c.decay = DecayRates::none();
  return dynamics::with_resolved_steps(c);
}

void transfer_figure() {
  const Trajectory tr = dynamics::evolve(fig2(Protocol::CStirsapCd));
  double p3 = 0, excited = 0;
  for (const auto& p : tr.populations) {
    p3 = std::max(p3, p[2]);
    excited = std::max(excited, p[1] + p[3]);
  }
  const double p5 = dynamics::transfer_efficiency(tr);
  report(1, "counter-diabatic transfer", p5 >= 0.95 && p3 < 0.05 && excited < 0.01,
         fmt("rho55(tf) = %.6f (>= 0.95), max rho33 = %.3g (< 0.05), max rho22+rho44 = %.3g (< 0.01)", p5, p3,
             excited));

  const double plain = dynamics::transfer_efficiency(dynamics::evolve(fig2(Protocol::CStirap)));
  report(2, "no counter-diabatic field", plain < 0.2, fmt("rho55(tf) = %.6f (< 0.2)", plain));
}

void amplitude_sweep() {
  const auto grid = ex::default_omega0_grid();
  const auto r = ex::sweep_rabi_amplitude(ex::standard_cd_config(), grid);
  const auto& plain = r.get("stirap").values;
  const auto& cd = r.get("cd").values;
  const std::size_t best = ex::argmax(plain);
  const double at = grid[best] / pi;
  bool dominates = r.failures.empty();
  double worst_gap = 1.0;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    worst_gap = std::min(worst_gap, cd[i] - plain[i]);
    dominates = dominates && cd[i] >= plain[i];
  }
  const bool ok = std::abs(plain[best] - 0.94) <= 0.03 && at >= 100.0 && at <= 150.0 && dominates;
  report(3, "amplitude sweep", ok,
         fmt("plain max %.4f at omega0 = %.0f pi (0.94 +- 0.03 in [100, 150] pi); min(cd - plain) = %.3g (>= 0)",
             plain[best], at, worst_gap));
}

void gamma_time_grid() {
  const auto gammas = ex::default_gamma_grid();
  const auto tfs = ex::default_grid_tf();
  std::vector<double> g_sub, t_sub;
  for (double g : gammas) {
    if (g >= 0.2 * pi - 1e-12 && g <= 0.4 * pi + 1e-12) g_sub.push_back(g);
  }
  for (double t : tfs) {
    if (t >= 0.5 - 1e-12 && t <= 1.5 + 1e-12) t_sub.push_back(t);
  }
  const SystemConfig base = ex::standard_chosen_path_config();
  const auto r = ex::grid_gamma_time(base, g_sub, t_sub);
  const auto& v = r.get("chosen-path").values;
  const std::size_t worst = std::min_element(v.begin(), v.end()) - v.begin();
  const auto idx = r.unravel(worst);
  const double floor_value = r.failures.empty() ? v[worst] : std::nan("");

  const auto pair = ex::grid_gamma_time(base, {0.001 * pi, 0.3 * pi}, {1.0});
  const double small = pair.get("chosen-path").values[0];
  const double good = pair.get("chosen-path").values[1];
  const bool ok = floor_value >= 0.95 && good - small >= 0.10;
  report(4, "gamma x operation-time grid", ok,
         fmt("min over %.0f sub-grid cells = %.4f at gamma = %.3f pi, tf = %.3f us (>= 0.95); ",
             static_cast<double>(v.size()), floor_value, g_sub[idx[0]] / pi, t_sub[idx[1]]) +
             fmt("eff(0.3 pi) - eff(0.001 pi) at tf = 1 us = %.4f - %.4f = %.4f (>= 0.10)", good, small, good - small));
}

void bridge_amplitude() {
  const auto tfs = ex::default_tf_grid();
  const auto deltas = ex::default_delta_list();
  const auto single = ex::amplitude_curve(0.3 * pi, {1.0}, {1500.0 * pi});
  const double amp = single.get("omega1_max").values[0] / pi;

  const auto r = ex::amplitude_curve(0.3 * pi, tfs, deltas);
  const auto& v = r.get("omega1_max").values;
  double worst_delta = 0.5, worst_tf = -0.5;
  for (std::size_t i = 0; i < tfs.size(); ++i) {
    const std::vector<double> row(v.begin() + i * deltas.size(), v.begin() + (i + 1) * deltas.size());
    const double b = ex::fit_power_law(deltas, row);
    if (std::abs(b - 0.5) > std::abs(worst_delta - 0.5)) worst_delta = b;
  }
  for (std::size_t j = 0; j < deltas.size(); ++j) {
    std::vector<double> col;
    for (std::size_t i = 0; i < tfs.size(); ++i) col.push_back(v[i * deltas.size() + j]);
    const double b = ex::fit_power_law(tfs, col);
    if (std::abs(b + 0.5) > std::abs(worst_tf + 0.5)) worst_tf = b;
  }
  const bool ok = std::abs(amp - 40.0) <= 4.0 && std::abs(worst_delta - 0.5) <= 0.05 &&
                  std::abs(worst_tf + 0.5) <= 0.05;
  report(5, "modified bridge amplitude", ok,
         fmt("max |Omega1| = %.3f pi (40 pi +- 10%%); worst exponents: delta %.4f (0.5 +- 0.05), tf %.4f (-0.5 +- 0.05)",
             amp, worst_delta, worst_tf));
}

void round_trip() {
  const auto r = ex::round_trip(ex::standard_chosen_path_config(AngularFrequency(1500.0 * pi)), {1000000});
  const double chi = r.creation_efficiency;
  const double det = r.detection_efficiency;
  const bool ok = std::abs(chi - 0.9755) <= 0.01 && std::abs(det - 0.9516) <= 0.015 &&
                  std::abs(det - chi * chi) < 0.01 && r.ideal_detection >= 0.999;
  report(6, "creation and detection round trip", ok,
         fmt("chi = %.5f (0.9755 +- 0.01), detection = %.5f (0.9516 +- 0.015), |det - chi^2| = %.2e (< 0.01), "
             "ideal rho11(2tf) = %.6f (>= 0.999)",
             chi, det, std::abs(det - chi * chi), r.ideal_detection));
}

// Each property returns a short description of what it measured.
struct Property {
  std::string name;
  std::function<bool(std::string&)> check;
};

bool rk4_order(std::string& out) {
  const double omega1 = 50.0;
  double err[3];
  const int steps[3] = {1250, 2500, 5000};
  for (int r = 0; r < 3; ++r) {
    dynamics::Window w;
    w.fields = [&](double) { return FieldSample{omega1, 0, 0, 0, 0}; };
    w.duration_us = 1.0;
    w.steps = steps[r];
    Trajectory tr;
    dynamics::propagate(DensityMatrix::pure_level(0), w, AngularFrequency(0.0), DecayRates::none(), 0.0, {}, tr);
    err[r] = 0.0;
    for (std::size_t k = 0; k < tr.size(); ++k) {
      const double s = std::sin(omega1 * tr.times[k]);
      err[r] = std::max(err[r], std::abs(tr.populations[k][1] - s * s));
    }
  }
  const double q1 = err[0] / err[1], q2 = err[1] / err[2];
  out = fmt("error ratios %.2f, %.2f (16 +- 2); Rabi oracle error %.2e (< 1e-6)", q1, q2, err[2]);
  return std::abs(q1 - 16.0) <= 2.0 && std::abs(q2 - 16.0) <= 2.0 && err[2] < 1e-6;
}

bool trace_behaviour(std::string& out) {
  double drift = 0.0;
  dynamics::RecordOptions rec;
  rec.observer = [&](double, const Matrix5& rho) { drift = std::max(drift, std::abs(rho.trace().real() - 1.0)); };
  dynamics::evolve(fig2(Protocol::CStirsapCd, false), rec);
  const Trajectory lossy = dynamics::evolve(fig2(Protocol::CStirsapCd));
  double rise = 0.0;
  for (std::size_t k = 1; k < lossy.size(); ++k) rise = std::max(rise, lossy.trace[k] - lossy.trace[k - 1]);
  out = fmt("closed-system trace drift %.2e (< 1e-8); largest trace increase with decay %.2e (<= 1e-9)", drift, rise);
  return drift < 1e-8 && rise <= 1e-9;
}

bool dark_null(std::string& out) {
  double worst = 0.0;
  const PulseParams p = std::get<PulseParams>(ex::standard_cd_config().pulse);
  for (int i = 0; i <= 1000; ++i) {
    const double t = i / 1000.0;
    const auto g = pulses::gaussian_pair(p, t);
    const double b = pulses::bridge_rabi(g.omega2, g.omega3);
    const auto e = reduction::effective_hamiltonian({b, g.omega2, g.omega3, b}, AngularFrequency(2000.0 * pi));
    Matrix3 h = e.matrix() - e.beta3 * Matrix3::Identity();
    const Vector3 d = reduction::dark_state(e.pump, e.stokes);
    worst = std::max(worst, (h * d).norm() / std::hypot(e.pump, e.stokes));
  }
  out = fmt("relative residual %.2e (< 1e-12)", worst);
  return worst < 1e-12;
}

bool cd_identity(std::string& out) {
  const PulseParams p = std::get<PulseParams>(ex::standard_cd_config().pulse);
  double worst = 0.0;
  for (int i = 0; i < 1000; ++i) {
    const double t = i / 999.0;
    const auto g = pulses::gaussian_pair(p, t);
    const double ref = 4.0 * p.tau_us / (p.sigma_us * p.sigma_us) * g.omega2 * g.omega3 /
                       (g.omega2 * g.omega2 + g.omega3 * g.omega3);
    worst = std::max(worst, std::abs(pulses::cd_field(p, t) - ref) / ref);
  }
  out = fmt("relative deviation %.2e (< 1e-12)", worst);
  return worst < 1e-12;
}

bool elimination_equivalence(std::string& out) {
  const SystemConfig c = fig2(Protocol::CStirsapCd, false);
  const int stride = c.steps / 500;
  const auto full = dynamics::evolve_amplitudes(c, {stride});
  const auto reduced = reduction::evolve_effective(c, stride);
  double worst = 0.0;
  for (std::size_t k = 0; k < full.times.size() && k < reduced.times.size(); ++k) {
    const auto& a = full.amplitudes[k];
    worst = std::max({worst, std::abs(std::norm(a(0)) - reduced.populations[k][0]),
                      std::abs(std::norm(a(2)) - reduced.populations[k][1]),
                      std::abs(std::norm(a(4)) - reduced.populations[k][2])});
  }
  const double peak = 30.0 * pi * std::sqrt(2.0);
  out = fmt("max population difference %.2e (< 0.02) at margin %.1f", worst, 2000.0 * pi / peak);
  return worst < 0.02 && full.times.size() == reduced.times.size();
}

bool inversion_round_trip(std::string& out) {
  double worst = 0.0;
  const ChosenPathParams cp{0.3 * pi, 1.0, Phase::Creation, AngularFrequency(1500.0 * pi)};
  const double d = cp.delta.rad_per_us();
  for (int i = 1; i < 1000; ++i) {
    const auto e = pulses::chosen_path_effective(cp, i / 1000.0);
    const auto c = pulses::invert_ae(e.pump, e.stokes, cp.delta);
    worst = std::max(worst, std::abs(std::abs(c.omega1 * c.omega2 / d) - std::abs(e.pump)) / std::abs(e.pump));
    worst = std::max(worst, std::abs(std::abs(c.omega3 * c.omega4 / d) - std::abs(e.stokes)) / std::abs(e.stokes));
  }
  out = fmt("relative deviation %.2e (< 1e-12)", worst);
  return worst < 1e-12;
}

bool endpoint_limits(std::string& out) {
  double worst = 0.0;
  for (double g : {0.001, 0.3, 0.5}) {
    for (Phase phase : {Phase::Creation, Phase::Detection}) {
      const ChosenPathParams cp{g * pi, 1.0, phase, AngularFrequency(1500.0 * pi)};
      for (double t : {0.0, 1.0}) {
        const FieldSample f = pulses::sample_fields(Protocol::CStirsapChosenPath, cp, t);
        worst = std::max({worst, std::abs(f.omega1), std::abs(f.omega2), std::abs(f.omega3), std::abs(f.omega4)});
      }
    }
  }
  out = fmt("largest endpoint field %.2e (== 0)", worst);
  return worst == 0.0;
}

bool step_halving(std::string& out) {
  double worst = 0.0;
  for (Protocol proto : {Protocol::CStirsapCd, Protocol::CStirap}) {
    SystemConfig c = fig2(proto);
    const double a = dynamics::transfer_efficiency(dynamics::evolve(c, {c.steps}));
    c.steps *= 2;
    const double b = dynamics::transfer_efficiency(dynamics::evolve(c, {c.steps}));
    worst = std::max(worst, std::abs(a - b));
  }
  SystemConfig cp = dynamics::with_resolved_steps(ex::standard_chosen_path_config(AngularFrequency(1500.0 * pi)));
  const double a = dynamics::transfer_efficiency(dynamics::evolve(cp, {cp.steps}));
  cp.steps *= 2;
  worst = std::max(worst, std::abs(a - dynamics::transfer_efficiency(dynamics::evolve(cp, {cp.steps}))));
  out = fmt("largest change of rho55(tf) on doubling steps %.2e (< 1e-6)", worst);
  return worst < 1e-6;
}

void property_suite() {
  const std::vector<Property> props = {
      {"RK4 order and Rabi oracle", rk4_order},
      {"trace conservation and monotonicity", trace_behaviour},
      {"dark-state null vector", dark_null},
      {"counter-diabatic closed form", cd_identity},
      {"adiabatic-elimination equivalence", elimination_equivalence},
      {"inverse elimination round trip", inversion_round_trip},
      {"chosen-path endpoint limits", endpoint_limits},
      {"step-halving convergence", step_halving},
  };
  bool all = true;
  std::string failed;
  for (const auto& p : props) {
    std::string detail;
    const bool ok = p.check(detail);
    std::printf("      %s %s: %s\n", ok ? "ok  " : "FAIL", p.name.c_str(), detail.c_str());
    if (!ok) {
      all = false;
      failed += (failed.empty() ? "" : ", ") + p.name;
    }
  }
  report(7, "property suite", all, all ? std::to_string(props.size()) + " properties hold" : "failed: " + failed);
}

}  // namespace

int main() {
  transfer_figure();
  amplitude_sweep();
  gamma_time_grid();
  bridge_amplitude();
  round_trip();
  property_suite();
  std::printf("%d of 7 criteria failed\n", failures);
  return failures;
}
