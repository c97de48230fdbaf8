#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace loopspace::lab {

/// Raised for malformed or out-of-range experiment configuration.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct Tolerances {
  double oracle_tol = 1e-7;  ///< residuals against closed forms and exact inverses
  double fd_tol = 1e-5;      ///< residuals that involve finite differences
};

struct ExperimentConfig {
  std::string manifold = "sphere2";
  int resolution = 128;
  int path_grid = 64;
  int ode_steps = 200;
  Tolerances tolerances;
  std::uint64_t seed = 0;
  std::string suite;
  std::string out = "reports";
  int group_order = 4;  ///< 0 selects the full circle group
  int flow_steps = 100;
  int trials = 0;       ///< 0 lets each suite use its own default
  int truncation = 40;
};

/// Parses a JSON document; unknown keys and wrongly typed values are errors.
ExperimentConfig parse_config(const std::string& json_text);

/// Throws ConfigError when a field is out of range.
void validate(const ExperimentConfig& config);

/// Canonical JSON echo of everything that affects the results (not `out`).
std::string config_echo(const ExperimentConfig& config);

}  // namespace loopspace::lab
