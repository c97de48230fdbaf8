#pragma once

#include <cmath>
#include <initializer_list>
#include <limits>
#include <string>

#include "lab/config.hpp"
#include "lab/report.hpp"
#include "lab/sampling.hpp"
#include "loopspace/error.hpp"
#include "loopspace/manifold.hpp"

namespace loopspace::lab::detail {

struct Context {
  Context(const ExperimentConfig& c, const std::string& stream)
      : cfg(c), manifold(EmbeddedManifold::from_tag(c.manifold)), rng(c.seed, stream) {}

  const ExperimentConfig& cfg;
  EmbeddedManifold manifold;
  Sampler rng;

  [[nodiscard]] int trials(int fallback) const { return cfg.trials > 0 ? cfg.trials : fallback; }
  [[nodiscard]] int n() const { return cfg.resolution; }
  [[nodiscard]] double oracle_tol() const { return cfg.tolerances.oracle_tol; }
  [[nodiscard]] double fd_tol() const { return cfg.tolerances.fd_tol; }

  void require(std::initializer_list<ManifoldKind> kinds) const {
    for (ManifoldKind k : kinds)
      if (manifold.kind() == k) return;
    throw ConfigError("suite " + cfg.suite + " does not support manifold " + cfg.manifold);
  }
};

/// Running maximum in which a NaN (a failed evaluation) is sticky.
class MaxResidual {
 public:
  void update(double x) {
    if (std::isnan(x)) failed_ = true;
    else if (x > value_) value_ = x;
  }
  void fail() { failed_ = true; }
  [[nodiscard]] double value() const { return failed_ ? std::numeric_limits<double>::quiet_NaN() : value_; }
  operator double() const { return value(); }  // NOLINT(google-explicit-constructor)

 private:
  double value_ = 0.0;
  bool failed_ = false;
};

/// Runs f, turning a library error into a failed (NaN) residual.
template <class F>
double attempt(F&& f) {
  try {
    return f();
  } catch (const Error&) {
    return std::numeric_limits<double>::quiet_NaN();
  }
}

/// 0 when f raises the expected kind, 1 otherwise.
template <class F>
double expect_error(ErrorKind kind, F&& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.kind() == kind ? 0.0 : 1.0;
  }
  return 1.0;
}

void chart_roundtrip(Context& c, Report& r);
void transition_cocycle(Context& c, Report& r);
void vertical_derivative_suite(Context& c, Report& r);
void tangent_identification(Context& c, Report& r);
void metric(Context& c, Report& r);
void covderiv_adjoint(Context& c, Report& r);
void geodesic_pointwise(Context& c, Report& r);
void transport_pointwise(Context& c, Report& r);
void torsion_loop(Context& c, Report& r);
void frame_extract(Context& c, Report& r);
void exp_nonsurjective(Context& c, Report& r);
void fibration(Context& c, Report& r);
void tube_lp(Context& c, Report& r);
void equivariant(Context& c, Report& r);
void polarization_index(Context& c, Report& r);
void compactness(Context& c, Report& r);

}  // namespace loopspace::lab::detail
