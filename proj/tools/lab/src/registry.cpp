#include <algorithm>
#include <chrono>

#include "lab/suites.hpp"
#include "suite_util.hpp"

namespace loopspace::lab {

namespace {

using SuiteFn = void (*)(detail::Context&, Report&);

SuiteInfo entry(std::string name, std::string summary, SuiteFn fn) {
  const std::string stream = name;
  return {std::move(name), std::move(summary), [fn, stream](const ExperimentConfig& cfg, Report& report) {
            detail::Context ctx(cfg, stream);
            fn(ctx, report);
          }};
}

}  // namespace

const std::vector<SuiteInfo>& suites() {
  static const std::vector<SuiteInfo> all = {
      entry("chart-roundtrip", "chart maps and their inverses, transition inverses", detail::chart_roundtrip),
      entry("transition-cocycle", "transition functions compose and are pointwise", detail::transition_cocycle),
      entry("vertical-derivative", "derivative of looped fibre maps is the looped vertical derivative",
            detail::vertical_derivative_suite),
      entry("tangent-identification", "tangent vectors of loop space are loops of tangent vectors",
            detail::tangent_identification),
      entry("metric", "the L2 metric on sections", detail::metric),
      entry("covderiv-adjoint", "looped covariant derivative against a Christoffel oracle on S^2",
            detail::covderiv_adjoint),
      entry("geodesic-pointwise", "loop geodesics are pointwise geodesics", detail::geodesic_pointwise),
      entry("transport-pointwise", "loop parallel transport is pointwise transport", detail::transport_pointwise),
      entry("torsion-loop", "torsion of a looped connection", detail::torsion_loop),
      entry("frame-extract", "matrix loops from pointwise-linear module maps", detail::frame_extract),
      entry("fibration", "based-loop fibration and partition-of-unity sections", detail::fibration),
      entry("tube-lp", "tubes around loops with coinciding basepoints", detail::tube_lp),
      entry("equivariant", "circle-equivariant averaging and tubes", detail::equivariant),
      entry("exp-nonsurjective", "a loop not reachable by the loop exponential on S^2", detail::exp_nonsurjective),
      entry("polarization-index", "Fredholm index of Toeplitz blocks", detail::polarization_index),
      entry("compactness", "decay of off-diagonal Toeplitz blocks", detail::compactness),
  };
  return all;
}

Report run_suite(const ExperimentConfig& config) {
  validate(config);
  const auto& all = suites();
  const auto it = std::find_if(all.begin(), all.end(), [&](const SuiteInfo& s) { return s.name == config.suite; });
  if (it == all.end()) throw UnknownSuiteError("unknown suite '" + config.suite + "'");
  Report report;
  report.suite = config.suite;
  report.config = config;
  const auto start = std::chrono::steady_clock::now();
  it->run(config, report);
  report.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return report;
}

}  // namespace loopspace::lab
