#pragma once

#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

#include "lab/config.hpp"
#include "lab/report.hpp"

namespace loopspace::lab {

class UnknownSuiteError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct SuiteInfo {
  std::string name;
  std::string summary;
  std::function<void(const ExperimentConfig&, Report&)> run;
};

const std::vector<SuiteInfo>& suites();

/// Throws UnknownSuiteError or ConfigError; check failures are recorded in
/// the returned report, not thrown.
Report run_suite(const ExperimentConfig& config);

}  // namespace loopspace::lab
