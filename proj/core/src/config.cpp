// SPDX-License-Identifier: Apache-2.0
#include "vanetsim/config.hpp"

#include <algorithm>
#include <cctype>
#include <ctime>
#include <fstream>
#include <sstream>

#include "json.hpp"

namespace vanetsim {

namespace {

using nlohmann::json;

double as_number(const json& v, const std::string& key) {
  if (!v.is_number()) {
    throw ConfigError("config key '" + key + "' must be a number");
  }
  return v.get<double>();
}

int as_int(const json& v, const std::string& key) {
  if (!v.is_number_integer()) {
    throw ConfigError("config key '" + key + "' must be an integer");
  }
  return v.get<int>();
}

bool as_bool(const json& v, const std::string& key) {
  if (!v.is_boolean()) {
    throw ConfigError("config key '" + key + "' must be a boolean");
  }
  return v.get<bool>();
}

std::string as_string(const json& v, const std::string& key) {
  if (!v.is_string()) {
    throw ConfigError("config key '" + key + "' must be a string");
  }
  return v.get<std::string>();
}

std::vector<double> as_number_list(const json& v, const std::string& key) {
  if (!v.is_array()) {
    throw ConfigError("config key '" + key + "' must be an array of numbers");
  }
  std::vector<double> out;
  for (const auto& e : v) out.push_back(as_number(e, key));
  return out;
}

ExperimentConfig from_json(const json& j) {
  if (!j.is_object()) throw ConfigError("config root must be a JSON object");

  // A run manifest embeds the resolved config under "config"; accept it so
  // manifests replay directly.
  if (j.contains("config")) return from_json(j.at("config"));

  ExperimentConfig cfg;
  for (const auto& [key, value] : j.items()) {
    if (key == "users") {
      cfg.users = as_int(value, key);
    } else if (key == "street_spacing") {
      cfg.street_spacing = as_number(value, key);
    } else if (key == "map_extent") {
      cfg.map_extent = as_number(value, key);
    } else if (key == "disk_radius") {
      cfg.disk_radius = as_number(value, key);
    } else if (key == "speed") {
      cfg.speed = as_number(value, key);
    } else if (key == "go_straight_prob") {
      cfg.go_straight_prob = as_number(value, key);
    } else if (key == "gamma_o_db") {
      cfg.gamma_o_db = as_number(value, key);
    } else if (key == "gamma_o_db_sweep") {
      cfg.gamma_o_db_sweep = as_number_list(value, key);
    } else if (key == "go_straight_sweep") {
      cfg.go_straight_sweep = as_number_list(value, key);
    } else if (key == "trials") {
      cfg.trials = as_int(value, key);
    } else if (key == "master_seed") {
      if (!value.is_number_unsigned() && !value.is_number_integer()) {
        throw ConfigError("config key 'master_seed' must be an integer");
      }
      cfg.master_seed = value.get<std::uint64_t>();
    } else if (key == "relay_mode") {
      const std::string s = as_string(value, key);
      if (s == "af") {
        cfg.relay_mode = RelayMode::AF;
      } else if (s == "df") {
        cfg.relay_mode = RelayMode::DF;
      } else {
        throw ConfigError("config key 'relay_mode' must be \"af\" or \"df\"");
      }
    } else if (key == "scheduler") {
      const std::string s = as_string(value, key);
      if (s == "single_flow") {
        cfg.scheduler_mode = SchedulerMode::SingleFlow;
      } else if (s == "multi_flow") {
        cfg.scheduler_mode = SchedulerMode::MultiFlow;
      } else if (s == "both") {
        cfg.scheduler_mode = SchedulerMode::Both;
      } else {
        throw ConfigError(
            "config key 'scheduler' must be \"single_flow\", \"multi_flow\" "
            "or \"both\"");
      }
    } else if (key == "path_loss_exponent") {
      cfg.path_loss_exponent = as_number(value, key);
    } else if (key == "reference_distance") {
      cfg.reference_distance = as_number(value, key);
    } else if (key == "rayleigh_fading") {
      cfg.rayleigh_fading = as_bool(value, key);
    } else if (key == "beta") {
      cfg.beta = as_number(value, key);
    } else if (key == "background_vehicles") {
      cfg.background_vehicles = as_int(value, key);
    } else if (key == "direction_policy") {
      const std::string s = as_string(value, key);
      if (s == "random") {
        cfg.direction_policy = DirectionPolicy::Random;
      } else if (s == "uplink") {
        cfg.direction_policy = DirectionPolicy::AllUplink;
      } else if (s == "downlink") {
        cfg.direction_policy = DirectionPolicy::AllDownlink;
      } else {
        throw ConfigError(
            "config key 'direction_policy' must be \"random\", \"uplink\" or "
            "\"downlink\"");
      }
    } else if (key == "perm_cap") {
      cfg.perm_cap = as_int(value, key);
    } else if (key == "allow_over_cap") {
      cfg.allow_over_cap = as_bool(value, key);
    } else if (key == "workers") {
      cfg.workers = as_int(value, key);
    } else {
      throw ConfigError("unknown config key: '" + key + "'");
    }
  }
  cfg.validate();
  return cfg;
}

json to_json(const ExperimentConfig& cfg) {
  json j;
  j["users"] = cfg.users;
  j["street_spacing"] = cfg.street_spacing;
  j["map_extent"] = cfg.map_extent;
  j["disk_radius"] = cfg.disk_radius;
  j["speed"] = cfg.speed;
  j["go_straight_prob"] = cfg.go_straight_prob;
  j["gamma_o_db"] = cfg.gamma_o_db;
  j["gamma_o_db_sweep"] = cfg.gamma_o_db_sweep;
  j["go_straight_sweep"] = cfg.go_straight_sweep;
  j["trials"] = cfg.trials;
  j["master_seed"] = cfg.master_seed;
  j["relay_mode"] = to_string(cfg.relay_mode);
  j["scheduler"] = cfg.scheduler_mode == SchedulerMode::SingleFlow
                       ? "single_flow"
                       : cfg.scheduler_mode == SchedulerMode::MultiFlow
                             ? "multi_flow"
                             : "both";
  j["path_loss_exponent"] = cfg.path_loss_exponent;
  j["reference_distance"] = cfg.reference_distance;
  j["rayleigh_fading"] = cfg.rayleigh_fading;
  j["beta"] = cfg.beta;
  j["background_vehicles"] = cfg.background_vehicles;
  j["direction_policy"] = cfg.direction_policy == DirectionPolicy::Random
                              ? "random"
                              : cfg.direction_policy ==
                                        DirectionPolicy::AllUplink
                                    ? "uplink"
                                    : "downlink";
  j["perm_cap"] = cfg.perm_cap;
  j["allow_over_cap"] = cfg.allow_over_cap;
  j["workers"] = cfg.workers;
  return j;
}

}  // namespace

ExperimentConfig parse_config_text(const std::string& text) {
  const bool blank = std::all_of(text.begin(), text.end(), [](unsigned char c) {
    return std::isspace(c);
  });
  if (blank) {
    ExperimentConfig cfg;  // empty file: all defaults
    cfg.validate();
    return cfg;
  }
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("config is not valid JSON: ") + e.what());
  }
  return from_json(j);
}

ExperimentConfig parse_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("config file not found: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_config_text(ss.str());
}

std::string config_to_json(const ExperimentConfig& cfg) {
  return to_json(cfg).dump(2) + "\n";
}

void write_manifest(const RunManifest& manifest, const std::string& path) {
  json j;
  j["version"] = manifest.version;
  j["timestamp_utc"] = manifest.timestamp_utc;
  j["master_seed"] = manifest.master_seed;
  j["config"] = to_json(manifest.config);
  j["outputs"] = manifest.outputs;
  std::ofstream out(path);
  if (!out) throw ConfigError("cannot write manifest: " + path);
  out << j.dump(2) << "\n";
}

std::string version_string() {
#ifdef VANETSIM_VERSION
  return std::string("vanetsim ") + VANETSIM_VERSION;
#else
  return "vanetsim (unversioned)";
#endif
}

}  // namespace vanetsim
