// Copyright 2026 The lindblad-mitigation Authors
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

#ifndef LMIT_JSON_UTIL_HPP
#define LMIT_JSON_UTIL_HPP

#include <filesystem>
#include <fstream>
#include <initializer_list>
#include <sstream>
#include <string>

#include <nlohmann/json.hpp>

#include "lmit/error.hpp"
#include "lmit/ode.hpp"

namespace lmit::json_util {

using json = nlohmann::json;

inline json load_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read config file '" + path.string() + "'");
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw ConfigError("'" + path.string() + "' is not valid JSON: " + e.what());
  }
}

inline const json& require_object(const json& j, const std::string& where) {
  if (!j.is_object()) throw ConfigError(where + ": expected an object");
  return j;
}

/// Rejects keys outside `allowed`, so typos fail loudly.
inline void check_keys(const json& obj, std::initializer_list<const char*> allowed,
                       const std::string& where) {
  require_object(obj, where);
  for (const auto& [key, _] : obj.items()) {
    bool ok = false;
    for (const char* a : allowed) ok = ok || key == a;
    if (!ok) throw ConfigError(where + ": unknown key '" + key + "'");
  }
}

/// Reads obj[key] into out when present.
template <class T>
void read(const json& obj, const char* key, T& out, const std::string& where) {
  const auto it = obj.find(key);
  if (it == obj.end()) return;
  try {
    out = it->template get<T>();
  } catch (const json::exception& e) {
    throw ConfigError(where + "." + key + ": " + e.what());
  }
}

template <class T>
T required(const json& obj, const char* key, const std::string& where) {
  if (!obj.contains(key)) throw ConfigError(where + ": missing required key '" + key + "'");
  T out{};
  read(obj, key, out, where);
  return out;
}

/// {"method": "rk4" | "rk45", "dt", "rtol", "atol", "max_steps"}.
inline IntegratorConfig parse_integrator(const json& j, const std::string& where) {
  check_keys(j, {"method", "dt", "rtol", "atol", "max_steps"}, where);
  IntegratorConfig cfg;
  std::string method = "rk4";
  read(j, "method", method, where);
  if (method == "rk4")
    cfg.method = IntegratorMethod::RK4;
  else if (method == "rk45")
    cfg.method = IntegratorMethod::RK45;
  else
    throw ConfigError(where + ".method: expected 'rk4' or 'rk45', got '" + method + "'");
  read(j, "dt", cfg.dt, where);
  read(j, "rtol", cfg.rtol, where);
  read(j, "atol", cfg.atol, where);
  read(j, "max_steps", cfg.max_steps, where);
  try {
    cfg.validate();
  } catch (const Error& e) {
    throw ConfigError(where + ": " + e.what());
  }
  return cfg;
}

inline json integrator_to_json(const IntegratorConfig& cfg) {
  return {{"method", cfg.method == IntegratorMethod::RK4 ? "rk4" : "rk45"},
          {"dt", cfg.dt},
          {"rtol", cfg.rtol},
          {"atol", cfg.atol},
          {"max_steps", cfg.max_steps}};
}

}  // namespace lmit::json_util

#endif  // LMIT_JSON_UTIL_HPP
