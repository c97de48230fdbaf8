#include "lab/config.hpp"

#include <cmath>
#include <json.hpp>
#include <set>

#include "loopspace/error.hpp"
#include "loopspace/loop.hpp"
#include "loopspace/manifold.hpp"

namespace loopspace::lab {

namespace {

using json = nlohmann::json;

template <class T>
T read(const json& doc, const char* key, T fallback) {
  if (!doc.contains(key)) return fallback;
  try {
    return doc.at(key).get<T>();
  } catch (const json::exception&) {
    throw ConfigError(std::string("config key '") + key + "' has the wrong type");
  }
}

int read_int(const json& doc, const char* key, int fallback) {
  if (!doc.contains(key)) return fallback;
  const json& v = doc.at(key);
  if (!v.is_number_integer()) throw ConfigError(std::string("config key '") + key + "' must be an integer");
  return v.get<int>();
}

}  // namespace

ExperimentConfig parse_config(const std::string& json_text) {
  json doc;
  try {
    doc = json::parse(json_text);
  } catch (const json::exception& e) {
    throw ConfigError(std::string("config is not valid JSON: ") + e.what());
  }
  if (!doc.is_object()) throw ConfigError("config must be a JSON object");

  static const std::set<std::string> known = {"manifold", "resolution", "path_grid", "ode_steps",
                                              "tolerances", "seed", "suite", "out",
                                              "group_order", "flow_steps", "trials", "truncation"};
  for (const auto& [key, value] : doc.items()) {
    if (!known.contains(key)) throw ConfigError("unknown config key '" + key + "'");
  }

  ExperimentConfig c;
  c.manifold = read<std::string>(doc, "manifold", c.manifold);
  c.resolution = read_int(doc, "resolution", c.resolution);
  c.path_grid = read_int(doc, "path_grid", c.path_grid);
  c.ode_steps = read_int(doc, "ode_steps", c.ode_steps);
  c.suite = read<std::string>(doc, "suite", c.suite);
  c.out = read<std::string>(doc, "out", c.out);
  c.group_order = read_int(doc, "group_order", c.group_order);
  c.flow_steps = read_int(doc, "flow_steps", c.flow_steps);
  c.trials = read_int(doc, "trials", c.trials);
  c.truncation = read_int(doc, "truncation", c.truncation);
  if (doc.contains("seed")) {
    const json& s = doc.at("seed");
    if (!s.is_number_unsigned()) throw ConfigError("config key 'seed' must be a non-negative integer");
    c.seed = s.get<std::uint64_t>();
  }
  if (doc.contains("tolerances")) {
    const json& t = doc.at("tolerances");
    if (!t.is_object()) throw ConfigError("config key 'tolerances' must be an object");
    for (const auto& [key, value] : t.items()) {
      if (key != "oracle_tol" && key != "fd_tol") throw ConfigError("unknown tolerance '" + key + "'");
    }
    c.tolerances.oracle_tol = read<double>(t, "oracle_tol", c.tolerances.oracle_tol);
    c.tolerances.fd_tol = read<double>(t, "fd_tol", c.tolerances.fd_tol);
  }
  return c;
}

void validate(const ExperimentConfig& c) {
  try {
    (void)EmbeddedManifold::from_tag(c.manifold);
  } catch (const Error& e) {
    throw ConfigError("invalid manifold '" + c.manifold + "': " + e.what());
  }
  if (!is_valid_resolution(c.resolution)) throw ConfigError("resolution must be a power of two and at least 8");
  if (c.path_grid < 4) throw ConfigError("path_grid must be at least 4");
  if (c.ode_steps < 1) throw ConfigError("ode_steps must be positive");
  for (double tol : {c.tolerances.oracle_tol, c.tolerances.fd_tol}) {
    if (!(tol > 0.0) || !std::isfinite(tol)) throw ConfigError("tolerances must be positive and finite");
  }
  if (c.group_order < 0) throw ConfigError("group_order must be non-negative");
  if (c.group_order > 0 && c.resolution % c.group_order != 0) {
    throw ConfigError("group_order must divide the resolution");
  }
  if (c.flow_steps < 1) throw ConfigError("flow_steps must be positive");
  if (c.trials < 0) throw ConfigError("trials must be non-negative");
  if (c.truncation < 1) throw ConfigError("truncation must be positive");
}

std::string config_echo(const ExperimentConfig& c) {
  json doc;
  doc["manifold"] = c.manifold;
  doc["resolution"] = c.resolution;
  doc["path_grid"] = c.path_grid;
  doc["ode_steps"] = c.ode_steps;
  doc["tolerances"] = {{"oracle_tol", c.tolerances.oracle_tol}, {"fd_tol", c.tolerances.fd_tol}};
  doc["seed"] = c.seed;
  doc["suite"] = c.suite;
  doc["group_order"] = c.group_order;
  doc["flow_steps"] = c.flow_steps;
  doc["trials"] = c.trials;
  doc["truncation"] = c.truncation;
  return doc.dump();
}

}  // namespace loopspace::lab
