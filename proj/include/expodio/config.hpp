/* Copyright 2026 The Expodio Authors. All Rights Reserved.

Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at

    http://www.apache.org/licenses/LICENSE-2.0

Unless required by applicable law or agreed to in writing, software
distributed under the License is distributed on an "AS IS" BASIS,
WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
See the License for the specific language governing permissions and
limitations under the License.
==============================================================================*/

// Layered solver settings. A JSON config file and command-line flags are
// both parsed into SettingsLayer values and applied over the defaults, file
// first, so that flags win.

#pragma once

#include <algorithm>
#include <chrono>
#include <cstdlib>
#include <fstream>
#include <optional>
#include <stdexcept>
#include <string>
#include <thread>

#include "expodio/engine.hpp"
#include "json.hpp"

namespace expodio {

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct SettingsLayer {
  std::optional<BigInt> ceiling;
  std::optional<u64> prime_budget;
  std::optional<u64> prime_cap;
  std::optional<u64> max_modulus;
  std::optional<u64> max_pops;
  std::optional<u64> wall_clock_ms;
  std::optional<u64> min_period;
  std::optional<u64> jobs;
};

namespace config_detail {

inline u64 positive(const nlohmann::json& j, const std::string& key) {
  if (!j.is_number_unsigned() || j.get<u64>() == 0) throw ConfigError("config key '" + key + "' must be a positive integer");
  return j.get<u64>();
}

inline BigInt parse_ceiling(const nlohmann::json& j) {
  if (j.is_number_unsigned()) return BigInt(j.get<u64>());
  if (j.is_string()) {
    const std::string s = j.get<std::string>();
    if (s.empty() || !std::all_of(s.begin(), s.end(), [](char ch) { return ch >= '0' && ch <= '9'; }))
      throw ConfigError("config key 'ceiling' must be a decimal integer");
    return BigInt(s);
  }
  throw ConfigError("config key 'ceiling' must be an integer or a decimal string");
}

}  // namespace config_detail

/// Parses a JSON object; unknown keys are an error so that typos surface.
inline SettingsLayer parse_settings(const nlohmann::json& j) {
  using config_detail::positive;
  if (!j.is_object()) throw ConfigError("config file must hold a JSON object");
  SettingsLayer out;
  for (const auto& [key, value] : j.items()) {
    if (key == "ceiling") out.ceiling = config_detail::parse_ceiling(value);
    else if (key == "prime_budget") out.prime_budget = positive(value, key);
    else if (key == "prime_cap") out.prime_cap = positive(value, key);
    else if (key == "max_modulus") out.max_modulus = positive(value, key);
    else if (key == "max_pops") out.max_pops = positive(value, key);
    else if (key == "wall_clock_ms") out.wall_clock_ms = positive(value, key);
    else if (key == "min_period") out.min_period = positive(value, key);
    else if (key == "jobs") out.jobs = positive(value, key);
    else throw ConfigError("unknown config key '" + key + "'");
  }
  return out;
}

inline SettingsLayer load_settings_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read config file " + path);
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(in);
  } catch (const nlohmann::json::parse_error& ex) {
    throw ConfigError("config file " + path + " is not valid JSON: " + ex.what());
  }
  return parse_settings(j);
}

inline void validate(const SolverConfig& cfg) {
  if (cfg.ceiling < 1) throw ConfigError("ceiling must be positive");
  if (cfg.prime_budget == 0 || cfg.prime_cap == 0 || cfg.max_pops == 0 || cfg.min_period == 0)
    throw ConfigError("budgets must be positive");
  if (cfg.max_modulus < 2 || cfg.max_modulus > arith::kModulusCap)
    throw ConfigError("max_modulus must lie in [2, 2^62]");
  if (cfg.prime_cap > arith::kModulusCap) throw ConfigError("prime_cap must not exceed 2^62");
}

inline void apply(SolverConfig& cfg, const SettingsLayer& layer) {
  if (layer.ceiling) cfg.ceiling = *layer.ceiling;
  if (layer.prime_budget) cfg.prime_budget = *layer.prime_budget;
  if (layer.prime_cap) cfg.prime_cap = *layer.prime_cap;
  if (layer.max_modulus) cfg.max_modulus = *layer.max_modulus;
  if (layer.max_pops) cfg.max_pops = *layer.max_pops;
  if (layer.wall_clock_ms) cfg.wall_clock_limit = std::chrono::milliseconds(*layer.wall_clock_ms);
  if (layer.min_period) cfg.min_period = *layer.min_period;
}

/// Defaults, then the file layer, then the flag layer.
inline SolverConfig resolve_config(const SettingsLayer& file, const SettingsLayer& flags) {
  SolverConfig cfg;
  apply(cfg, file);
  apply(cfg, flags);
  validate(cfg);
  return cfg;
}

/// Flag, then file, then EXPODIO_JOBS, then the hardware thread count.
inline u64 resolve_jobs(const SettingsLayer& file, const SettingsLayer& flags) {
  if (flags.jobs) return *flags.jobs;
  if (file.jobs) return *file.jobs;
  if (const char* env = std::getenv("EXPODIO_JOBS"); env && *env) {
    char* end = nullptr;
    const unsigned long long v = std::strtoull(env, &end, 10);
    if (*end != '\0' || v == 0) throw ConfigError("EXPODIO_JOBS must be a positive integer");
    return v;
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

/// Budgets used when re-running unresolved instances.
inline SolverConfig enlarged(const SolverConfig& cfg) {
  SolverConfig out = cfg;
  const auto grow = [](u64 v, u64 factor, u64 limit) { return v > limit / factor ? limit : v * factor; };
  out.prime_budget = grow(cfg.prime_budget, 4, u64{1} << 32);
  out.prime_cap = grow(cfg.prime_cap, 16, arith::kModulusCap);
  out.max_pops = grow(cfg.max_pops, 10, u64{1} << 40);
  out.min_period = 1;
  if (cfg.wall_clock_limit) out.wall_clock_limit = *cfg.wall_clock_limit * 10;
  return out;
}

}  // namespace expodio
