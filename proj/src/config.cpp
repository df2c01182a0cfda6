// SPDX-License-Identifier: Apache-2.0

#include "nfswarm/config.hpp"

#include "nfswarm/hash.hpp"

#include <json.hpp>

#include <fstream>
#include <set>
#include <sstream>

namespace nfswarm {

namespace {

using nlohmann::json;

void reject_unknown(const json& obj, const std::string& where,
                    const std::set<std::string>& allowed) {
  for (auto it = obj.begin(); it != obj.end(); ++it)
    if (!allowed.count(it.key()))
      throw ConfigError("config: unknown key '" + it.key() + "' in " + where);
}

template <typename T>
T get_or(const json& obj, const std::string& key, T fallback) {
  if (!obj.contains(key)) return fallback;
  try {
    return obj.at(key).get<T>();
  } catch (const json::exception&) {
    throw ConfigError("config: bad value for '" + key + "'");
  }
}

template <typename T>
T require(const json& obj, const std::string& key, const std::string& where) {
  if (!obj.contains(key))
    throw ConfigError("config: missing key '" + key + "' in " + where);
  try {
    return obj.at(key).get<T>();
  } catch (const json::exception&) {
    throw ConfigError("config: bad value for '" + key + "' in " + where);
  }
}

std::vector<double> grid_values(const json& node, const std::string& where) {
  if (node.is_array()) {
    std::vector<double> out;
    for (const auto& v : node) out.push_back(v.get<double>());
    if (out.empty()) throw ConfigError("config: empty grid in " + where);
    return out;
  }
  if (node.is_object()) {
    reject_unknown(node, where, {"min", "max", "count"});
    const double lo = require<double>(node, "min", where);
    const double hi = require<double>(node, "max", where);
    const int count = require<int>(node, "count", where);
    if (count < 2 || hi <= lo)
      throw ConfigError("config: bad range grid in " + where);
    std::vector<double> out(count);
    for (int i = 0; i < count; ++i)
      out[i] = lo + (hi - lo) * i / (count - 1);
    return out;
  }
  throw ConfigError("config: " + where + " must be an array or {min,max,count}");
}

ArrayConfig parse_array(const json& node) {
  reject_unknown(node, "array",
                 {"m_x", "m_y", "n_x", "n_y", "d", "dx_factor", "dy_factor",
                  "wavelength", "altitude", "ref_position"});
  ArrayConfig cfg;
  cfg.m_x = require<int>(node, "m_x", "array");
  cfg.m_y = require<int>(node, "m_y", "array");
  cfg.n_x = require<int>(node, "n_x", "array");
  cfg.n_y = require<int>(node, "n_y", "array");
  cfg.wavelength = require<double>(node, "wavelength", "array");
  cfg.d = get_or<double>(node, "d", cfg.wavelength / 2.0);
  cfg.dx_factor = get_or<double>(node, "dx_factor", 50.0);
  cfg.dy_factor = get_or<double>(node, "dy_factor", 50.0);
  cfg.altitude = get_or<double>(node, "altitude", 80.0);
  if (node.contains("ref_position")) {
    const auto rp = node.at("ref_position");
    if (!rp.is_array() || rp.size() != 3)
      throw ConfigError("config: ref_position must be a 3-vector");
    cfg.ref_position = Vec3(rp[0].get<double>(), rp[1].get<double>(),
                            rp[2].get<double>());
  } else {
    cfg.ref_position = Vec3(0.0, 0.0, cfg.altitude);
  }
  try {
    cfg.validate();
  } catch (const std::invalid_argument& e) {
    throw ConfigError(std::string("config: ") + e.what());
  }
  return cfg;
}

}  // namespace

ToolConfig parse_config(const std::string& json_text) {
  json root;
  try {
    root = json::parse(json_text);
  } catch (const json::exception& e) {
    throw ConfigError(std::string("config: JSON parse failure: ") + e.what());
  }
  if (!root.is_object()) throw ConfigError("config: top level must be an object");
  reject_unknown(root, "top level",
                 {"array", "grid", "experiment", "scenario", "sweep"});
  if (!root.contains("array"))
    throw ConfigError("config: missing 'array' section");

  ToolConfig out;
  out.array = parse_array(root.at("array"));
  out.experiment.cfg = out.array;

  if (root.contains("grid")) {
    const json& g = root.at("grid");
    reject_unknown(g, "grid",
                   {"r_min", "r_max", "delta", "angle_resolution",
                    "full_resolution", "coherence_level"});
    out.experiment.grid_r_min = get_or<double>(g, "r_min", 50.0);
    out.experiment.grid_r_max = get_or<double>(g, "r_max", 80.0);
    out.experiment.grid_delta = get_or<double>(g, "delta", 3e-4);
    out.experiment.angle_resolution = get_or<double>(g, "angle_resolution", 0.0);
    out.experiment.full_angle_resolution = get_or<bool>(g, "full_resolution", false);
    out.experiment.coherence_level = get_or<double>(g, "coherence_level", 0.3);
  }

  if (root.contains("experiment")) {
    const json& e = root.at("experiment");
    reject_unknown(e, "experiment",
                   {"q_x", "q_y", "sparsity", "snr_grid_db", "trials", "seed",
                    "estimators", "nlos_attenuation_db", "per_trial_ratio",
                    "workers", "farfield_range", "nm_max_iter", "nm_tol",
                    "cos_theta_range", "sin_phi_range", "r_range"});
    out.experiment.q_x = get_or<int>(e, "q_x", 12);
    out.experiment.q_y = get_or<int>(e, "q_y", 12);
    out.experiment.sparsity = get_or<int>(e, "sparsity", 1);
    if (e.contains("snr_grid_db"))
      out.experiment.snr_grid_db =
          e.at("snr_grid_db").get<std::vector<double>>();
    out.experiment.trials = get_or<int>(e, "trials", 200);
    out.experiment.seed = get_or<std::uint64_t>(e, "seed", 1);
    if (e.contains("estimators")) {
      out.experiment.estimators.clear();
      for (const auto& name : e.at("estimators")) {
        try {
          out.experiment.estimators.push_back(
              parse_estimator(name.get<std::string>()));
        } catch (const std::invalid_argument& ex) {
          throw ConfigError(std::string("config: ") + ex.what());
        }
      }
    }
    out.experiment.paths.nlos_attenuation_db =
        get_or<double>(e, "nlos_attenuation_db", 5.0);
    out.experiment.per_trial_ratio = get_or<bool>(e, "per_trial_ratio", false);
    out.experiment.workers = get_or<int>(e, "workers", 0);
    out.experiment.farfield_range = get_or<double>(e, "farfield_range", 1e5);
    out.experiment.nm_max_iter = get_or<int>(e, "nm_max_iter", 300);
    out.experiment.nm_spread_tol = get_or<double>(e, "nm_tol", 1e-10);
    auto range_pair = [&](const char* key, double& lo, double& hi) {
      if (!e.contains(key)) return;
      const auto arr = e.at(key);
      if (!arr.is_array() || arr.size() != 2)
        throw ConfigError(std::string("config: ") + key + " must be [lo, hi]");
      lo = arr[0].get<double>();
      hi = arr[1].get<double>();
      if (hi <= lo) throw ConfigError(std::string("config: empty range ") + key);
    };
    range_pair("cos_theta_range", out.experiment.paths.cos_theta_lo,
               out.experiment.paths.cos_theta_hi);
    range_pair("sin_phi_range", out.experiment.paths.sin_phi_lo,
               out.experiment.paths.sin_phi_hi);
    range_pair("r_range", out.experiment.paths.r_lo, out.experiment.paths.r_hi);
  }
  if (out.experiment.estimators.empty())
    for (const std::string& n : estimator_names())
      out.experiment.estimators.push_back(parse_estimator(n));

  out.scenario.cfg = out.array;
  if (root.contains("scenario")) {
    const json& s = root.at("scenario");
    reject_unknown(s, "scenario",
                   {"theta_deg", "phi_deg", "range", "p_bar", "beta0"});
    out.scenario.theta = get_or<double>(s, "theta_deg", 30.0) * kPi / 180.0;
    out.scenario.phi = get_or<double>(s, "phi_deg", 45.0) * kPi / 180.0;
    out.scenario.range = get_or<double>(s, "range", 50.0);
    out.scenario.p_bar = get_or<double>(s, "p_bar", 1.0);
    out.scenario.beta0 = get_or<double>(s, "beta0", 1.0);
  } else {
    out.scenario.theta = 30.0 * kPi / 180.0;
    out.scenario.phi = 45.0 * kPi / 180.0;
  }
  out.experiment.beta0 = out.scenario.beta0;

  if (root.contains("sweep")) {
    const json& s = root.at("sweep");
    reject_unknown(s, "sweep", {"spacing_factors", "uav_counts"});
    if (s.contains("spacing_factors"))
      out.sweep.spacing_factors = grid_values(s.at("spacing_factors"), "sweep.spacing_factors");
    if (s.contains("uav_counts"))
      out.sweep.uav_counts = grid_values(s.at("uav_counts"), "sweep.uav_counts");
  }
  if (out.sweep.spacing_factors.empty()) {
    for (int i = 1; i <= 10; ++i)
      out.sweep.spacing_factors.push_back(10.0 * i);
  }
  if (out.sweep.uav_counts.empty()) {
    for (int i = 1; i <= 16; ++i) out.sweep.uav_counts.push_back(i);
  }

  out.canonical = root.dump(2);
  out.hash = sha256_hex(out.canonical);
  return out;
}

ToolConfig load_config(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw ConfigError("config: cannot open '" + path + "'");
  std::ostringstream oss;
  oss << is.rdbuf();
  return parse_config(oss.str());
}

}  // namespace nfswarm
