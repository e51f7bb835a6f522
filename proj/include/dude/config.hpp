#pragma once

#include <charconv>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "association.hpp"
#include "channel.hpp"
#include "msa.hpp"
#include "ssa.hpp"

namespace dude {

// Flat key=value scenario description. Powers and noise are kept in dBm here and converted by the accessors.
struct ScenarioConfig {
  double region_width = 1000.0;
  double region_height = 1000.0;
  double lambda_macro = 3.0;
  double femto_ratio = 3.0;
  double lambda_users = 5500.0;
  std::size_t user_count = 0;
  std::size_t active_users_dl = 500;
  std::size_t active_users_ul = 400;
  double macro_power_dbm = 46.0;
  double femto_power_dbm = 20.0;
  double device_power_dbm = 20.0;
  double path_loss_exponent = 4.0;
  double propagation_constant = 1.0;
  double noise_dbm = -106.0;
  double bandwidth_macro_hz = 20e6;
  double bandwidth_femto_hz = 1e9;
  double alpha = 0.5;
  double A = 2.0;
  double epsilon_u = 2.0;
  double gamma = 0.004;
  std::size_t iterations = 8000;
  std::string allocation_formula = "modified";
  double hysteresis = 0.0;
  double initial_multiplier = 0.01;
  std::size_t replications = 1;
  std::uint64_t seed = 1;
  std::size_t grid_resolution = 200;
  std::size_t distance_bins = 50;
  std::size_t trace_stride = 10;
  std::size_t oscillation_window = 500;
  double oscillation_tol = 1e-3;
  std::string out_dir = "out";

  DeploymentParams deployment() const {
    DeploymentParams d;
    d.region = {region_width, region_height};
    d.lambda_macro = lambda_macro;
    d.lambda_femto = lambda_macro * femto_ratio;
    d.lambda_users = lambda_users;
    d.user_count = user_count;
    return d;
  }
  TierPowers powers() const { return {dbm_to_mw(macro_power_dbm), dbm_to_mw(femto_power_dbm), dbm_to_mw(device_power_dbm)}; }
  ChannelParams channel() const { return {path_loss_exponent, propagation_constant, dbm_to_mw(noise_dbm)}; }
  SsaParams ssa() const { return {alpha, A}; }
  MsaParams msa() const {
    MsaParams p;
    p.alpha = alpha;
    p.epsilon_u = epsilon_u;
    p.gamma = gamma;
    p.iterations = iterations;
    p.formula = parse_formula(allocation_formula);
    p.hysteresis = hysteresis;
    return p;
  }

  void validate() const {
    if (!(region_width > 0.0 && region_height > 0.0)) throw std::invalid_argument("region must have positive size");
    if (lambda_macro < 0.0 || femto_ratio < 0.0 || lambda_users < 0.0)
      throw std::invalid_argument("intensities must be >= 0");
    if (replications < 1) throw std::invalid_argument("replications must be >= 1");
    if (grid_resolution < 2) throw std::invalid_argument("grid_resolution must be >= 2");
    if (trace_stride < 1) throw std::invalid_argument("trace_stride must be >= 1");
    if (initial_multiplier < 0.0) throw std::invalid_argument("initial_multiplier must be >= 0");
    parse_formula(allocation_formula);
    msa().validate();
  }
};

namespace detail {

inline std::string format_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

template <class T>
T parse_number(const std::string& key, const std::string& s) {
  T v{};
  const char* end = s.data() + s.size();
  auto [p, ec] = std::from_chars(s.data(), end, v);
  if (ec != std::errc() || p != end) throw std::invalid_argument("bad value for " + key + ": '" + s + "'");
  return v;
}

struct Field {
  std::function<std::string(const ScenarioConfig&)> get;
  std::function<void(ScenarioConfig&, const std::string&)> set;
};

template <class T>
Field field(T ScenarioConfig::*m, const char* key) {
  Field f;
  f.get = [m](const ScenarioConfig& c) {
    if constexpr (std::is_same_v<T, std::string>)
      return c.*m;
    else if constexpr (std::is_floating_point_v<T>)
      return format_double(c.*m);
    else
      return std::to_string(c.*m);
  };
  f.set = [m, key](ScenarioConfig& c, const std::string& s) {
    if constexpr (std::is_same_v<T, std::string>)
      c.*m = s;
    else
      c.*m = parse_number<T>(key, s);
  };
  return f;
}

inline const std::vector<std::pair<std::string, Field>>& fields() {
  static const std::vector<std::pair<std::string, Field>> f = {
      {"region_width", field(&ScenarioConfig::region_width, "region_width")},
      {"region_height", field(&ScenarioConfig::region_height, "region_height")},
      {"lambda_macro", field(&ScenarioConfig::lambda_macro, "lambda_macro")},
      {"femto_ratio", field(&ScenarioConfig::femto_ratio, "femto_ratio")},
      {"lambda_users", field(&ScenarioConfig::lambda_users, "lambda_users")},
      {"user_count", field(&ScenarioConfig::user_count, "user_count")},
      {"active_users_dl", field(&ScenarioConfig::active_users_dl, "active_users_dl")},
      {"active_users_ul", field(&ScenarioConfig::active_users_ul, "active_users_ul")},
      {"macro_power_dbm", field(&ScenarioConfig::macro_power_dbm, "macro_power_dbm")},
      {"femto_power_dbm", field(&ScenarioConfig::femto_power_dbm, "femto_power_dbm")},
      {"device_power_dbm", field(&ScenarioConfig::device_power_dbm, "device_power_dbm")},
      {"path_loss_exponent", field(&ScenarioConfig::path_loss_exponent, "path_loss_exponent")},
      {"propagation_constant", field(&ScenarioConfig::propagation_constant, "propagation_constant")},
      {"noise_dbm", field(&ScenarioConfig::noise_dbm, "noise_dbm")},
      {"bandwidth_macro_hz", field(&ScenarioConfig::bandwidth_macro_hz, "bandwidth_macro_hz")},
      {"bandwidth_femto_hz", field(&ScenarioConfig::bandwidth_femto_hz, "bandwidth_femto_hz")},
      {"alpha", field(&ScenarioConfig::alpha, "alpha")},
      {"A", field(&ScenarioConfig::A, "A")},
      {"epsilon_u", field(&ScenarioConfig::epsilon_u, "epsilon_u")},
      {"gamma", field(&ScenarioConfig::gamma, "gamma")},
      {"iterations", field(&ScenarioConfig::iterations, "iterations")},
      {"allocation_formula", field(&ScenarioConfig::allocation_formula, "allocation_formula")},
      {"hysteresis", field(&ScenarioConfig::hysteresis, "hysteresis")},
      {"initial_multiplier", field(&ScenarioConfig::initial_multiplier, "initial_multiplier")},
      {"replications", field(&ScenarioConfig::replications, "replications")},
      {"seed", field(&ScenarioConfig::seed, "seed")},
      {"grid_resolution", field(&ScenarioConfig::grid_resolution, "grid_resolution")},
      {"distance_bins", field(&ScenarioConfig::distance_bins, "distance_bins")},
      {"trace_stride", field(&ScenarioConfig::trace_stride, "trace_stride")},
      {"oscillation_window", field(&ScenarioConfig::oscillation_window, "oscillation_window")},
      {"oscillation_tol", field(&ScenarioConfig::oscillation_tol, "oscillation_tol")},
      {"out_dir", field(&ScenarioConfig::out_dir, "out_dir")},
  };
  return f;
}

inline std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

}  // namespace detail

// Applies key=value pairs onto `base`. Unknown keys are collected and reported together.
inline ScenarioConfig apply_overrides(ScenarioConfig base, const std::vector<std::pair<std::string, std::string>>& kv) {
  std::vector<std::string> unknown;
  for (const auto& [k, v] : kv) {
    bool found = false;
    for (const auto& [name, f] : detail::fields()) {
      if (name == k) {
        f.set(base, v);
        found = true;
        break;
      }
    }
    if (!found) unknown.push_back(k);
  }
  if (!unknown.empty()) {
    std::string msg = "invalid config keys:";
    for (const auto& k : unknown) msg += " " + k;
    throw std::invalid_argument(msg);
  }
  return base;
}

// '#' starts a comment; blank lines are ignored.
inline ScenarioConfig parse_config(const std::string& text, ScenarioConfig base = {}) {
  std::vector<std::pair<std::string, std::string>> kv;
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (auto h = line.find('#'); h != std::string::npos) line.resize(h);
    line = detail::trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw std::invalid_argument("line " + std::to_string(lineno) + ": expected key=value");
    kv.emplace_back(detail::trim(line.substr(0, eq)), detail::trim(line.substr(eq + 1)));
  }
  return apply_overrides(std::move(base), kv);
}

inline ScenarioConfig load_config(const std::string& path, ScenarioConfig base = {}) {
  std::ifstream f(path);
  if (!f) throw std::runtime_error("cannot open config: " + path);
  std::stringstream ss;
  ss << f.rdbuf();
  return parse_config(ss.str(), std::move(base));
}

inline std::string serialize_config(const ScenarioConfig& c) {
  std::string out;
  for (const auto& [name, f] : detail::fields()) out += name + "=" + f.get(c) + "\n";
  return out;
}

inline bool operator==(const ScenarioConfig& a, const ScenarioConfig& b) {
  return serialize_config(a) == serialize_config(b);
}

// FNV-1a over the serialized form with out_dir blanked, so the hash names the scenario, not where it was written.
inline std::uint64_t config_hash(ScenarioConfig c) {
  c.out_dir.clear();
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char ch : serialize_config(c)) {
    h ^= ch;
    h *= 1099511628211ull;
  }
  return h;
}

}  // namespace dude
