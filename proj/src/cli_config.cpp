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

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include "cstirsap/cli.hpp"
#include "cstirsap/experiments.hpp"

namespace cstirsap::cli {

namespace {

const std::vector<std::string> kKeys = {
    "protocol",       "omega0_pi_mhz",      "tf_us",         "sigma_frac",   "tau_frac",
    "delta_pi_ghz",   "gamma_pi",           "steps",         "decay.g1_mhz", "decay.g2_mhz",
    "decay.g3_mhz",   "decay.g4_mhz",       "decay.g5_mhz",  "record_points", "omega0_grid_pi_mhz",
    "tf_grid_us",     "gamma_grid_pi",      "grid_tf_us",    "delta_list_pi_ghz",
    "stirap_omega0_pi_mhz"};

double number(const Json& config, const std::string& key) {
  const Json& v = config.at(key);
  if (!v.is_number()) throw ValidationError("config key '" + key + "' must be a number");
  const double x = v.get<double>();
  if (!std::isfinite(x)) throw ValidationError("config key '" + key + "' must be finite");
  return x;
}

int integer(const Json& config, const std::string& key) {
  const double x = number(config, key);
  if (x != std::floor(x) || std::abs(x) > 2e9) {
    throw ValidationError("config key '" + key + "' must be an integer");
  }
  return static_cast<int>(x);
}

void flatten_into(Json& out, const Json& in, const std::string& prefix) {
  for (auto it = in.begin(); it != in.end(); ++it) {
    const std::string key = prefix.empty() ? it.key() : prefix + "." + it.key();
    if (it->is_object()) {
      flatten_into(out, *it, key);
    } else {
      out[key] = *it;
    }
  }
}

Json flattened(const Json& in) {
  if (in.is_null()) return Json::object();
  if (!in.is_object()) throw ValidationError("config must be a key-value object");
  Json out = Json::object();
  flatten_into(out, in, "");
  return out;
}

void merge(Json& target, const Json& source) {
  for (auto it = source.begin(); it != source.end(); ++it) {
    if (std::find(kKeys.begin(), kKeys.end(), it.key()) == kKeys.end()) {
      throw ValidationError("unknown config key '" + it.key() + "'");
    }
    target[it.key()] = *it;
  }
}

std::vector<double> scaled(std::vector<double> v, double factor) {
  for (double& x : v) x *= factor;
  return v;
}

}  // namespace

const std::vector<std::string>& config_keys() { return kKeys; }

Json default_config() {
  Json c = Json::object();
  c["protocol"] = "cd";
  c["omega0_pi_mhz"] = 30.0;
  c["tf_us"] = 1.0;
  c["sigma_frac"] = 1.0 / 6.0;
  c["tau_frac"] = 0.1;
  c["delta_pi_ghz"] = 2.0;
  c["gamma_pi"] = 0.3;
  c["steps"] = "auto";
  c["decay.g1_mhz"] = 0.01;
  c["decay.g2_mhz"] = 30.0;
  c["decay.g3_mhz"] = 0.06;
  c["decay.g4_mhz"] = 30.0;
  c["decay.g5_mhz"] = 0.0;
  c["record_points"] = 2000;
  c["omega0_grid_pi_mhz"] = "10:250:5";
  c["tf_grid_us"] = "0.1:2.0:0.05";
  c["gamma_grid_pi"] = "0.001:0.5:#50";
  c["grid_tf_us"] = "0.2:2.0:#50";
  c["delta_list_pi_ghz"] = "1,1.5,2";
  c["stirap_omega0_pi_mhz"] = 125.0;
  return c;
}

Json load_config_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open config file '" + path.string() + "'");
  Json raw;
  try {
    raw = Json::parse(in, nullptr, true, true);
  } catch (const nlohmann::json::parse_error& e) {
    throw ValidationError("config file '" + path.string() + "' is not valid JSON: " + e.what());
  }
  return flattened(raw);
}

std::vector<double> parse_grid(const Json& value, const std::string& key) {
  std::vector<double> out;
  if (value.is_array()) {
    for (const auto& v : value) {
      if (!v.is_number()) throw ValidationError("grid '" + key + "' must contain only numbers");
      out.push_back(v.get<double>());
    }
  } else if (value.is_number()) {
    out.push_back(value.get<double>());
  } else if (value.is_string()) {
    const std::string text = value.get<std::string>();
    auto to_double = [&](const std::string& s) {
      std::size_t used = 0;
      double x = 0.0;
      try {
        x = std::stod(s, &used);
      } catch (const std::exception&) {
        throw ValidationError("grid '" + key + "' has a non-numeric entry '" + s + "'");
      }
      if (used != s.size()) throw ValidationError("grid '" + key + "' has a non-numeric entry '" + s + "'");
      return x;
    };
    std::vector<std::string> parts;
    const char sep = text.find(':') != std::string::npos ? ':' : ',';
    std::stringstream ss(text);
    for (std::string part; std::getline(ss, part, sep);) parts.push_back(part);
    if (sep == ':') {
      if (parts.size() != 3) throw ValidationError("grid '" + key + "' must be start:stop:step");
      const double a = to_double(parts[0]);
      const double b = to_double(parts[1]);
      if (!parts[2].empty() && parts[2][0] == '#') {
        const double n = to_double(parts[2].substr(1));
        if (n < 1 || n != std::floor(n)) throw ValidationError("grid '" + key + "' point count must be >= 1");
        out = experiments::linspace(a, b, static_cast<std::size_t>(n));
      } else {
        out = experiments::arange(a, b, to_double(parts[2]));
      }
    } else {
      for (const auto& p : parts) out.push_back(to_double(p));
    }
  } else {
    throw ValidationError("grid '" + key + "' must be an array or a string");
  }
  if (out.empty()) throw ValidationError("grid '" + key + "' must not be empty");
  for (double x : out) {
    if (!std::isfinite(x)) throw ValidationError("grid '" + key + "' must be finite");
  }
  return out;
}

RunSettings parse_config(const Json& file_values, const Json& flag_values) {
  Json config = default_config();
  const Json file_flat = flattened(file_values);
  const Json flag_flat = flattened(flag_values);
  merge(config, file_flat);
  merge(config, flag_flat);

  RunSettings s;
  s.config = config;
  s.protocol_explicit = file_flat.contains("protocol") || flag_flat.contains("protocol");

  const Json& protocol = config.at("protocol");
  if (!protocol.is_string()) throw ValidationError("config key 'protocol' must be a string");
  const Protocol proto = protocol_from_string(protocol.get<std::string>());

  const double tf = number(config, "tf_us");
  const AngularFrequency delta = unit_convert(number(config, "delta_pi_ghz"), FrequencyUnit::PiGHz);
  const AngularFrequency omega0 = unit_convert(number(config, "omega0_pi_mhz"), FrequencyUnit::PiMHz);
  const double gamma = kPi * number(config, "gamma_pi");

  PulseParams gaussian{omega0, number(config, "sigma_frac") * tf, number(config, "tau_frac") * tf, tf};
  ChosenPathParams chosen{gamma, tf, Phase::Creation, delta};
  gaussian.validate();
  chosen.validate();

  std::array<double, 5> rates{};
  for (int j = 0; j < 5; ++j) {
    rates[j] = unit_convert(number(config, "decay.g" + std::to_string(j + 1) + "_mhz"), FrequencyUnit::MHz)
                   .rad_per_us();
  }

  s.system.delta = delta;
  s.system.decay = DecayRates(rates);
  s.system.protocol = proto;
  if (proto == Protocol::CStirsapChosenPath) {
    s.system.pulse = chosen;
  } else {
    s.system.pulse = gaussian;
  }

  const Json& steps = config.at("steps");
  if (steps.is_string() && steps.get<std::string>() == "auto") {
    s.auto_steps = true;
    s.system.steps = SystemConfig{}.steps;
  } else {
    s.auto_steps = false;
    s.system.steps = integer(config, "steps");
  }
  s.system.validate();

  s.record_points = integer(config, "record_points");
  if (s.record_points < 2) throw ValidationError("record_points must be >= 2");

  s.omega0_grid = scaled(parse_grid(config.at("omega0_grid_pi_mhz"), "omega0_grid_pi_mhz"), kPi);
  s.tf_grid = parse_grid(config.at("tf_grid_us"), "tf_grid_us");
  s.gamma_grid = scaled(parse_grid(config.at("gamma_grid_pi"), "gamma_grid_pi"), kPi);
  s.grid_tf = parse_grid(config.at("grid_tf_us"), "grid_tf_us");
  s.delta_list = scaled(parse_grid(config.at("delta_list_pi_ghz"), "delta_list_pi_ghz"), 1000.0 * kPi);
  s.stirap_omega0 = unit_convert(number(config, "stirap_omega0_pi_mhz"), FrequencyUnit::PiMHz);
  for (double g : s.gamma_grid) {
    if (!(g > 0.0)) throw ValidationError("gamma grid must exclude zero (gamma must not be zero)");
  }
  return s;
}

}  // namespace cstirsap::cli
