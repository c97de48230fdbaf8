#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "lab/config.hpp"

namespace loopspace::lab {

struct CheckRecord {
  std::string id;
  std::string anchor;
  double residual = 0.0;
  double tolerance = 0.0;
  bool pass = false;
};

struct Report {
  std::string suite;
  ExperimentConfig config;
  std::vector<CheckRecord> checks;
  double wall_seconds = 0.0;

  /// pass is residual <= tolerance; NaN residuals fail.
  void add(std::string id, std::string anchor, double residual, double tolerance);
  [[nodiscard]] bool pass() const;
  /// nullptr when no check has this id.
  [[nodiscard]] const CheckRecord* find(const std::string& id) const;
};

inline constexpr int kReportSchemaVersion = 1;

/// Deterministic report body; wall time lives in the timing sidecar.
std::string report_json(const Report& report);
std::string report_csv(const Report& report);
std::string timing_json(const Report& report);

struct ReportFiles {
  std::filesystem::path json;
  std::filesystem::path csv;
  std::filesystem::path timing;
};

/// Writes <suite>-<seed>.json, .csv and .timing.json into dir.
ReportFiles write_report(const Report& report, const std::filesystem::path& dir);

}  // namespace loopspace::lab
