#include <CLI11.hpp>

#include <cstdio>
#include <iostream>
#include <optional>

#include "lab/config.hpp"
#include "lab/suites.hpp"
#include "loopspace/error.hpp"
#include "loopspace/io.hpp"

namespace {

enum Exit : int { kPass = 0, kChecksFailed = 1, kUnknownSuite = 2, kBadConfig = 3 };

struct RunOptions {
  std::string suite;
  std::string config_path;
  std::optional<std::string> manifold;
  std::optional<int> resolution;
  std::optional<std::uint64_t> seed;
  std::optional<std::string> out;
  std::optional<double> tol;
};

int run(const RunOptions& opt) {
  using namespace loopspace::lab;
  ExperimentConfig cfg;
  try {
    if (!opt.config_path.empty()) cfg = parse_config(loopspace::io::read_file(opt.config_path));
    if (!opt.suite.empty()) cfg.suite = opt.suite;
    if (opt.manifold) cfg.manifold = *opt.manifold;
    if (opt.resolution) cfg.resolution = *opt.resolution;
    if (opt.seed) cfg.seed = *opt.seed;
    if (opt.out) cfg.out = *opt.out;
    if (opt.tol) cfg.tolerances.oracle_tol = *opt.tol;
    if (cfg.suite.empty()) throw ConfigError("no suite given");
    const Report report = run_suite(cfg);
    const ReportFiles files = write_report(report, cfg.out);
    for (const CheckRecord& c : report.checks)
      std::printf("%-4s %-40s residual=%.3e tol=%.1e\n", c.pass ? "ok" : "FAIL", c.id.c_str(), c.residual,
                  c.tolerance);
    std::printf("%s: %s (%.2f s) -> %s\n", report.suite.c_str(), report.pass() ? "pass" : "FAIL",
                report.wall_seconds, files.json.string().c_str());
    return report.pass() ? kPass : kChecksFailed;
  } catch (const UnknownSuiteError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUnknownSuite;
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kBadConfig;
  } catch (const loopspace::Error& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kBadConfig;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Numerical experiments on smooth loop spaces"};
  app.require_subcommand(1);

  RunOptions opt;
  auto* run_cmd = app.add_subcommand("run", "run one experiment suite and write its report");
  run_cmd->add_option("--suite", opt.suite, "suite name (see list-suites)");
  run_cmd->add_option("--config", opt.config_path, "JSON experiment config")->check(CLI::ExistingFile);
  run_cmd->add_option("--manifold", opt.manifold, "flat:<n>, sphere2 or torus2");
  run_cmd->add_option("--resolution", opt.resolution, "samples per loop (power of two, at least 8)");
  run_cmd->add_option("--seed", opt.seed, "random seed");
  run_cmd->add_option("--out", opt.out, "report directory");
  run_cmd->add_option("--tol", opt.tol, "override the oracle tolerance");

  auto* list_cmd = app.add_subcommand("list-suites", "list available suites");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kBadConfig;
  }

  if (*list_cmd) {
    for (const auto& s : loopspace::lab::suites()) std::printf("%-24s %s\n", s.name.c_str(), s.summary.c_str());
    return kPass;
  }
  return run(opt);
}
