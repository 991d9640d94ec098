// Copyright 2026 The irsest Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef IRSEST_CONFIG_HPP
#define IRSEST_CONFIG_HPP

#include <cmath>
#include <cstdint>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>

#include <nlohmann/json.hpp>

#include "irsest/error.hpp"

namespace irsest {

// Full experiment parameterization. Distances in meters, losses in dB.
// Exactly one of snr_db / noise_variance is set.
struct SystemConfig {
  int num_bs_antennas = 20;
  int num_irs_elements = 10;
  int num_users = 20;
  double cell_radius = 1000.0;
  double min_user_distance = 500.0;
  double bs_irs_distance = 100.0;
  double ref_distance_irs_user = 1.0;
  double ref_distance_bs_irs = 1.0;
  double ref_loss_irs_user = 30.0;
  double ref_loss_bs_irs = 30.0;
  double exponent_irs_user = 2.0;
  double exponent_bs_irs = 2.8;
  double scattering_amplitude = 1.0;
  std::optional<double> snr_db = 0.0;
  std::optional<double> noise_variance;
  std::uint64_t master_seed = 1;
  // Sets beta_1,i = beta_2 = 1 so the per-user channel scale is v^2.
  bool normalized_units = false;

  // sigma^2 under unit-energy pilots.
  double resolved_noise_variance() const {
    if (noise_variance) return *noise_variance;
    return std::pow(10.0, -snr_db.value_or(0.0) / 10.0);
  }

  void set_snr_db(double snr) {
    snr_db = snr;
    noise_variance.reset();
  }

  void set_noise_variance(double sigma2) {
    noise_variance = sigma2;
    snr_db.reset();
  }

  void validate() const {
    auto fail = [](const std::string& what) { throw ConfigError(what); };
    if (num_bs_antennas < 1) fail("num_bs_antennas must be >= 1");
    if (num_irs_elements < 1) fail("num_irs_elements must be >= 1");
    if (num_users < 1) fail("num_users must be >= 1");
    if (!(min_user_distance > 0.0) || !(min_user_distance <= cell_radius))
      fail("need 0 < min_user_distance <= cell_radius");
    if (!(bs_irs_distance > 0.0)) fail("bs_irs_distance must be > 0");
    if (!(ref_distance_irs_user > 0.0) || !(ref_distance_bs_irs > 0.0))
      fail("reference distances must be > 0");
    if (!(scattering_amplitude >= 0.0) || !(scattering_amplitude <= 1.0))
      fail("scattering_amplitude must lie in [0, 1]");
    if (!(exponent_irs_user > 0.0) || !(exponent_bs_irs > 0.0))
      fail("path-loss exponents must be > 0");
    if (!std::isfinite(ref_loss_irs_user) || !std::isfinite(ref_loss_bs_irs))
      fail("reference losses must be finite");
    if (snr_db.has_value() == noise_variance.has_value())
      fail("exactly one of snr_db and noise_variance must be given");
    if (snr_db && std::isnan(*snr_db)) fail("snr_db must be a number");
    if (noise_variance && !(*noise_variance >= 0.0))
      fail("noise_variance must be >= 0");
  }
};

inline SystemConfig config_from_json(const nlohmann::json& j) {
  if (!j.is_object()) throw ConfigError("config must be a JSON object");
  SystemConfig c;
  try {
    auto read = [&](const char* key, auto& field) {
      if (j.contains(key)) j.at(key).get_to(field);
    };
    read("num_bs_antennas", c.num_bs_antennas);
    read("num_irs_elements", c.num_irs_elements);
    read("num_users", c.num_users);
    read("cell_radius", c.cell_radius);
    read("min_user_distance", c.min_user_distance);
    read("bs_irs_distance", c.bs_irs_distance);
    read("ref_distance_irs_user", c.ref_distance_irs_user);
    read("ref_distance_bs_irs", c.ref_distance_bs_irs);
    read("ref_loss_irs_user", c.ref_loss_irs_user);
    read("ref_loss_bs_irs", c.ref_loss_bs_irs);
    read("exponent_irs_user", c.exponent_irs_user);
    read("exponent_bs_irs", c.exponent_bs_irs);
    read("scattering_amplitude", c.scattering_amplitude);
    read("master_seed", c.master_seed);
    read("normalized_units", c.normalized_units);
    const bool has_snr = j.contains("snr_db");
    const bool has_noise = j.contains("noise_variance");
    if (has_snr && has_noise)
      throw ConfigError("give only one of snr_db and noise_variance");
    if (has_snr) c.set_snr_db(j.at("snr_db").get<double>());
    if (has_noise) c.set_noise_variance(j.at("noise_variance").get<double>());
    for (const auto& [key, _] : j.items()) {
      static const char* known[] = {
          "num_bs_antennas",   "num_irs_elements",      "num_users",
          "cell_radius",       "min_user_distance",     "bs_irs_distance",
          "ref_distance_irs_user", "ref_distance_bs_irs", "ref_loss_irs_user",
          "ref_loss_bs_irs",   "exponent_irs_user",     "exponent_bs_irs",
          "scattering_amplitude", "snr_db",             "noise_variance",
          "master_seed",       "normalized_units"};
      bool found = false;
      for (const char* k : known) found = found || key == k;
      if (!found) throw ConfigError("unknown config field: " + key);
    }
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("bad config value: ") + e.what());
  }
  c.validate();
  return c;
}

inline nlohmann::json config_to_json(const SystemConfig& c) {
  nlohmann::json j = {
      {"num_bs_antennas", c.num_bs_antennas},
      {"num_irs_elements", c.num_irs_elements},
      {"num_users", c.num_users},
      {"cell_radius", c.cell_radius},
      {"min_user_distance", c.min_user_distance},
      {"bs_irs_distance", c.bs_irs_distance},
      {"ref_distance_irs_user", c.ref_distance_irs_user},
      {"ref_distance_bs_irs", c.ref_distance_bs_irs},
      {"ref_loss_irs_user", c.ref_loss_irs_user},
      {"ref_loss_bs_irs", c.ref_loss_bs_irs},
      {"exponent_irs_user", c.exponent_irs_user},
      {"exponent_bs_irs", c.exponent_bs_irs},
      {"scattering_amplitude", c.scattering_amplitude},
      {"master_seed", c.master_seed},
      {"normalized_units", c.normalized_units}};
  if (c.snr_db) j["snr_db"] = *c.snr_db;
  if (c.noise_variance) j["noise_variance"] = *c.noise_variance;
  return j;
}

inline SystemConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file: " + path);
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError("config " + path + " is not valid JSON: " + e.what());
  }
  return config_from_json(j);
}

}  // namespace irsest

#endif  // IRSEST_CONFIG_HPP
