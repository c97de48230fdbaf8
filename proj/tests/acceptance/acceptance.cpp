// Runs the experiment suites against the project's acceptance thresholds and
// prints one PASS/FAIL line per criterion.  Exit status is nonzero if any
// criterion fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include "lab/config.hpp"
#include "lab/report.hpp"
#include "lab/suites.hpp"

namespace fs = std::filesystem;
using loopspace::lab::ExperimentConfig;
using loopspace::lab::Report;

namespace {

struct Outcome {
  bool pass = true;
  std::string detail;

  // residual must be a number no larger than limit.
  void at_most(const std::string& label, double residual, double limit) {
    const bool ok = std::isfinite(residual) && residual <= limit;
    note(label, residual, ok ? "<=" : ">", limit);
    pass = pass && ok;
  }
  void at_least(const std::string& label, double value, double limit) {
    const bool ok = std::isfinite(value) && value >= limit;
    note(label, value, ok ? ">=" : "<", limit);
    pass = pass && ok;
  }
  void require(const std::string& label, bool ok) {
    detail += (detail.empty() ? "" : "; ") + label + (ok ? " ok" : " FAILED");
    pass = pass && ok;
  }

 private:
  void note(const std::string& label, double v, const char* rel, double limit) {
    char buf[160];
    std::snprintf(buf, sizeof buf, "%s %.3g %s %.3g", label.c_str(), v, rel, limit);
    detail += (detail.empty() ? "" : "; ") + std::string(buf);
  }
};

ExperimentConfig config_for(const std::string& suite, const std::string& manifold = "sphere2", std::uint64_t seed = 0) {
  ExperimentConfig cfg;
  cfg.suite = suite;
  cfg.manifold = manifold;
  cfg.seed = seed;
  cfg.resolution = 128;
  cfg.ode_steps = 200;
  return cfg;
}

double residual(const Report& r, const std::string& id) {
  const auto* c = r.find(id);
  return c ? c->residual : std::nan("");
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

Outcome chart_roundtrip() {
  Outcome o;
  const auto t0 = std::chrono::steady_clock::now();
  for (const char* m : {"sphere2", "flat:3"}) {
    ExperimentConfig cfg = config_for("chart-roundtrip", m, 7);
    cfg.trials = 100;
    const Report r = loopspace::lab::run_suite(cfg);
    o.at_most(std::string(m) + " chart roundtrip", residual(r, "psi-inverse-after-psi"), 1e-6);
    o.at_most(std::string(m) + " transition inverse", residual(r, "transition-inverse"), 1e-6);
  }
  o.at_most("runtime s", seconds_since(t0), 10.0);
  return o;
}

Outcome vertical_derivative() {
  Outcome o;
  ExperimentConfig cfg = config_for("vertical-derivative");
  cfg.trials = 50;
  const Report r = loopspace::lab::run_suite(cfg);
  o.at_most("fd vs pointwise", residual(r, "looped-vs-pointwise"), 1e-5);
  o.at_most("fd vs analytic Jacobian", residual(r, "looped-vs-analytic"), 1e-5);
  o.at_most("LR-linearity", residual(r, "lr-linearity"), 1e-6);
  return o;
}

Outcome tangent_identification() {
  Outcome o;
  const Report r = loopspace::lab::run_suite(config_for("tangent-identification"));
  o.at_most("curve derivative", residual(r, "curve-derivative"), 1e-5);
  return o;
}

Outcome covariant_derivative() {
  Outcome o;
  const Report r = loopspace::lab::run_suite(config_for("covderiv-adjoint"));
  o.at_most("connector vs Christoffel", residual(r, "christoffel-oracle"), 1e-4);
  return o;
}

Outcome geodesics_transport() {
  Outcome o;
  const Report g = loopspace::lab::run_suite(config_for("geodesic-pointwise"));
  const Report t = loopspace::lab::run_suite(config_for("transport-pointwise"));
  o.at_most("geodesic vs closed form", residual(g, "pointwise-exp-oracle"), 1e-7);
  o.at_most("transport vs closed form", residual(t, "transport-vs-closed-form"), 1e-7);
  o.at_most("energy drift", residual(g, "energy-drift"), 1e-5);
  return o;
}

Outcome torsion() {
  Outcome o;
  const Report r = loopspace::lab::run_suite(config_for("torsion-loop"));
  o.at_most("looped cross-product torsion", residual(r, "looped-equals-pointwise"), 0.0);
  o.at_most("Levi-Civita fd torsion", residual(r, "levi-civita-fd-torsion"), 1e-4);
  return o;
}

Outcome frames() {
  Outcome o;
  ExperimentConfig cfg = config_for("frame-extract");
  cfg.trials = 20;
  const Report r = loopspace::lab::run_suite(cfg);
  o.at_most("reconstruction", residual(r, "reconstruction"), 1e-8);
  o.require("convolution rejected as not pointwise linear", residual(r, "convolution-rejected") == 0.0);
  return o;
}

Outcome fibration_tubes() {
  Outcome o;
  const Report f = loopspace::lab::run_suite(config_for("fibration"));
  const Report t = loopspace::lab::run_suite(config_for("tube-lp"));
  o.at_most("trivialisation roundtrip", residual(f, "trivialization-roundtrip"), 1e-6);
  o.at_most("tube roundtrip", residual(t, "tube-roundtrip"), 1e-6);
  for (int order : {4, 0}) {
    ExperimentConfig cfg = config_for("equivariant");
    cfg.group_order = order;
    const Report e = loopspace::lab::run_suite(cfg);
    const std::string g = order == 0 ? "S1" : "C" + std::to_string(order);
    o.at_most(g + " decompose/recompose", residual(e, "decompose-recompose"), 1e-6);
    o.at_most(g + " rotation commutation", residual(e, "rotation-commutation"), 1e-7);
    if (order == 0) o.at_most("flat S1 average vs mode 0", residual(e, "flat-mode-zero"), 1e-12);
  }
  return o;
}

Outcome nonsurjectivity() {
  Outcome o;
  const Report r = loopspace::lab::run_suite(config_for("exp-nonsurjective"));
  o.at_least("jump through pole", 1.0 / residual(r, "through-pole-inverse-jump"), 1.0);
  o.at_most("jump away from pole", residual(r, "away-from-pole-jump"), 0.1);
  return o;
}

Outcome polarization() {
  Outcome o;
  const auto t0 = std::chrono::steady_clock::now();
  ExperimentConfig cfg = config_for("polarization-index");
  cfg.trials = 20;
  const Report p = loopspace::lab::run_suite(cfg);
  const Report c = loopspace::lab::run_suite(config_for("compactness"));
  o.at_most("index != -winding count", residual(p, "index-equals-minus-winding"), 0.0);
  o.at_most("K vs K+4 disagreements", residual(p, "truncation-stability"), 0.0);
  o.at_most("A+- decay ratio per 8 modes", residual(c, "decay-plus-minus"), 1e-3);
  o.at_most("A-+ decay ratio per 8 modes", residual(c, "decay-minus-plus"), 1e-3);
  o.at_most("runtime s", seconds_since(t0), 30.0);
  return o;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

Outcome determinism(const fs::path& root) {
  Outcome o;
  const fs::path dirs[2] = {root / "first", root / "second"};
  double total = 0.0;
  for (const fs::path& d : dirs) {
    fs::remove_all(d);
    fs::create_directories(d);
    const auto t0 = std::chrono::steady_clock::now();
    for (const auto& s : loopspace::lab::suites()) {
      ExperimentConfig cfg = config_for(s.name, "sphere2", 11);
      (void)loopspace::lab::write_report(loopspace::lab::run_suite(cfg), d);
    }
    total = std::max(total, seconds_since(t0));
  }
  int compared = 0, differing = 0;
  for (const auto& s : loopspace::lab::suites()) {
    for (const char* ext : {".json", ".csv"}) {
      const std::string name = s.name + "-11" + ext;
      const std::string a = slurp(dirs[0] / name), b = slurp(dirs[1] / name);
      ++compared;
      if (a.empty() || a != b) ++differing;
    }
  }
  o.require(std::to_string(compared) + " report files byte-identical", differing == 0);
  o.at_most("full pass wall time s", total, 300.0);
  return o;
}

}  // namespace

int main(int argc, char** argv) {
  const fs::path root = argc > 1 ? fs::path(argv[1]) : fs::current_path() / "acceptance-reports";
  const std::vector<std::function<Outcome()>> criteria = {
      chart_roundtrip, vertical_derivative, tangent_identification, covariant_derivative, geodesics_transport,
      torsion,         frames,              fibration_tubes,        nonsurjectivity,      polarization,
      [&] { return determinism(root); },
  };
  int failures = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Outcome o;
    try {
      o = criteria[i]();
    } catch (const std::exception& e) {
      o.pass = false;
      o.detail = std::string("error: ") + e.what();
    }
    std::printf("CRITERION %zu %s  %s\n", i + 1, o.pass ? "PASS" : "FAIL", o.detail.c_str());
    std::fflush(stdout);
    failures += o.pass ? 0 : 1;
  }
  return failures == 0 ? 0 : 1;
}
