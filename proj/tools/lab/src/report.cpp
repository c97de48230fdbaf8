#include "lab/report.hpp"

#include <charconv>
#include <cmath>
#include <json.hpp>

#include "loopspace/io.hpp"

namespace loopspace::lab {

namespace {

using json = nlohmann::json;

std::string number(double x) {
  if (std::isnan(x)) return "nan";
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, res.ptr);
}

std::string stem(const Report& r) { return r.suite + "-" + std::to_string(r.config.seed); }

}  // namespace

void Report::add(std::string id, std::string anchor, double residual, double tolerance) {
  const bool ok = !std::isnan(residual) && residual <= tolerance;
  checks.push_back({std::move(id), std::move(anchor), residual, tolerance, ok});
}

bool Report::pass() const {
  for (const auto& c : checks)
    if (!c.pass) return false;
  return !checks.empty();
}

const CheckRecord* Report::find(const std::string& id) const {
  for (const auto& c : checks)
    if (c.id == id) return &c;
  return nullptr;
}

std::string report_json(const Report& r) {
  json checks = json::array();
  for (const auto& c : r.checks) {
    json rec;
    rec["id"] = c.id;
    rec["anchor"] = c.anchor;
    // nlohmann writes non-finite numbers as null.
    rec["residual"] = c.residual;
    rec["tolerance"] = c.tolerance;
    rec["pass"] = c.pass;
    checks.push_back(std::move(rec));
  }
  json doc;
  doc["schema_version"] = kReportSchemaVersion;
  doc["suite"] = r.suite;
  doc["seed"] = r.config.seed;
  doc["config"] = json::parse(config_echo(r.config));
  doc["checks"] = std::move(checks);
  doc["pass"] = r.pass();
  return doc.dump(2) + "\n";
}

std::string report_csv(const Report& r) {
  std::string out = "check_id,anchor,residual,tolerance,pass\n";
  for (const auto& c : r.checks) {
    out += c.id + ",\"" + c.anchor + "\"," + number(c.residual) + "," + number(c.tolerance) + "," +
           (c.pass ? "true" : "false") + "\n";
  }
  return out;
}

std::string timing_json(const Report& r) {
  json doc;
  doc["schema_version"] = kReportSchemaVersion;
  doc["suite"] = r.suite;
  doc["seed"] = r.config.seed;
  doc["wall_seconds"] = r.wall_seconds;
  return doc.dump(2) + "\n";
}

ReportFiles write_report(const Report& r, const std::filesystem::path& dir) {
  ReportFiles files{dir / (stem(r) + ".json"), dir / (stem(r) + ".csv"), dir / (stem(r) + ".timing.json")};
  io::write_file(files.json, report_json(r));
  io::write_file(files.csv, report_csv(r));
  io::write_file(files.timing, timing_json(r));
  return files;
}

}  // namespace loopspace::lab
