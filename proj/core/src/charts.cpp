#include "loopspace/charts.hpp"

#include <cmath>

#include "loopspace/error.hpp"

namespace loopspace {
namespace {

void require_on_manifold(const EmbeddedManifold& m, const SampledLoop& loop) {
  if (loop.dim() != m.ambient_dim()) {
    raise(ErrorKind::InvalidArgument, "loop dimension does not match " + m.tag());
  }
  for (int j = 0; j < loop.resolution(); ++j) m.require_on(loop.node(j));
}

}  // namespace

TangentSection::TangentSection(const EmbeddedManifold& m, SampledLoop base, SampledLoop vectors)
    : base_(std::move(base)), vectors_(std::move(vectors)) {
  if (base_.resolution() != vectors_.resolution() || base_.dim() != vectors_.dim()) {
    raise(ErrorKind::InvalidArgument, "section and base loop shapes differ");
  }
  require_on_manifold(m, base_);
  for (int j = 0; j < base_.resolution(); ++j) {
    const Eigen::VectorXd v = vectors_.samples().col(j);
    const Eigen::VectorXd off = v - m.tangent_projector(base_.samples().col(j)) * v;
    if (off.norm() > 1e-10 * std::max(1.0, v.norm())) {
      raise(ErrorKind::InvalidArgument, "section vector not tangent at node " + std::to_string(j));
    }
  }
}

TangentSection TangentSection::zero(const EmbeddedManifold& m, SampledLoop base) {
  SampledLoop z = SampledLoop::zero(base.dim(), base.resolution());
  return {m, std::move(base), std::move(z)};
}

TangentSection TangentSection::project(const EmbeddedManifold& m, SampledLoop base,
                                       const SampledLoop& ambient) {
  if (ambient.resolution() != base.resolution() || ambient.dim() != base.dim()) {
    raise(ErrorKind::InvalidArgument, "section and base loop shapes differ");
  }
  require_on_manifold(m, base);
  Eigen::MatrixXd v(base.dim(), base.resolution());
  for (int j = 0; j < base.resolution(); ++j) {
    v.col(j) = m.tangent_projector(base.samples().col(j)) * ambient.samples().col(j);
  }
  return {m, std::move(base), SampledLoop(std::move(v))};
}

void require_same_base(const SampledLoop& a, const SampledLoop& b) {
  if (a.dim() != b.dim() || a.resolution() != b.resolution() ||
      (a.samples() - b.samples()).cwiseAbs().maxCoeff() > 1e-12) {
    raise(ErrorKind::BaseMismatch, "sections are based at different loops");
  }
}

Chart::Chart(SampledLoop center, LocalAdditionSpec addition)
    : center_(std::move(center)), addition_(std::move(addition)) {
  require_on_manifold(addition_.manifold, center_);
}

SampledLoop chart_forward(const Chart& chart, const TangentSection& beta) {
  require_same_base(chart.center(), beta.base());
  const int n = beta.resolution();
  Eigen::MatrixXd out(chart.center().dim(), n);
  for (int j = 0; j < n; ++j) out.col(j) = local_addition(chart.addition(), beta.at(j));
  return SampledLoop(std::move(out));
}

bool chart_membership(const Chart& chart, const SampledLoop& gamma) {
  const SampledLoop& alpha = chart.center();
  if (gamma.dim() != alpha.dim() || gamma.resolution() != alpha.resolution()) return false;
  const EmbeddedManifold& m = chart.manifold();
  const double r = chart.addition().reach();
  for (int j = 0; j < alpha.resolution(); ++j) {
    if (!m.contains(gamma.node(j))) return false;
    if (!(m.distance(alpha.node(j), gamma.node(j)) < r)) return false;
  }
  return true;
}

TangentSection chart_inverse(const Chart& chart, const SampledLoop& gamma) {
  if (!chart_membership(chart, gamma)) {
    raise(ErrorKind::NotInChartDomain, "loop is outside the chart domain U_alpha");
  }
  const SampledLoop& alpha = chart.center();
  Eigen::MatrixXd v(alpha.dim(), alpha.resolution());
  for (int j = 0; j < alpha.resolution(); ++j) {
    v.col(j) = local_addition_inv(chart.addition(), alpha.node(j), gamma.node(j)).vector;
  }
  // Re-project to remove rounding normal to T_{alpha_j}M.
  return TangentSection::project(chart.manifold(), alpha, SampledLoop(std::move(v)));
}

TangentSection transition(const Chart& from, const Chart& to, const TangentSection& beta) {
  const SampledLoop image = chart_forward(from, beta);
  if (!chart_membership(to, image)) {
    raise(ErrorKind::NotInOverlap, "section does not map into the overlap of the charts");
  }
  return chart_inverse(to, image);
}

SampledLoop loop_map(const PointMap& f, const SampledLoop& gamma) {
  const Point first = f(gamma.node(0));
  Eigen::MatrixXd out(first.size(), gamma.resolution());
  out.col(0) = first;
  for (int j = 1; j < gamma.resolution(); ++j) out.col(j) = f(gamma.node(j));
  return SampledLoop(std::move(out));
}

SampledLoop constant_loop(const Point& x, int n) { return SampledLoop::constant(x, n); }

Point evaluate_at(const SampledLoop& gamma, double t) { return eval(gamma, t); }

SampledLoop looped_fiber_map(const FiberMap& psi, const SampledLoop& alpha) {
  const int n = alpha.resolution();
  const Point first = psi(alpha.time(0), alpha.node(0));
  Eigen::MatrixXd out(first.size(), n);
  out.col(0) = first;
  for (int j = 1; j < n; ++j) out.col(j) = psi(alpha.time(j), alpha.node(j));
  return SampledLoop(std::move(out));
}

namespace {

template <class Central>
SampledLoop difference(Central&& central, const DifferenceOptions& options) {
  const double h = options.step;
  if (!(h > 0.0)) raise(ErrorKind::InvalidArgument, "difference step must be positive");
  if (!options.richardson) return central(h);
  // (4 D(h/2) - D(h)) / 3
  SampledLoop fine = central(h / 2.0);
  fine *= 4.0 / 3.0;
  SampledLoop coarse = central(h);
  coarse *= 1.0 / 3.0;
  return fine - coarse;
}

}  // namespace

SampledLoop vertical_derivative(const FiberMap& psi, const SampledLoop& alpha, const SampledLoop& beta,
                                DifferenceOptions options) {
  if (alpha.dim() != beta.dim() || alpha.resolution() != beta.resolution()) {
    raise(ErrorKind::BaseMismatch, "direction loop does not match the base loop");
  }
  return difference(
      [&](double h) {
        const int n = alpha.resolution();
        const Point first = psi(alpha.time(0), alpha.node(0));
        Eigen::MatrixXd out(first.size(), n);
        for (int j = 0; j < n; ++j) {
          const double t = alpha.time(j);
          const Point a = alpha.node(j), b = beta.node(j);
          out.col(j) = (psi(t, a + h * b) - psi(t, a - h * b)) / (2.0 * h);
        }
        return SampledLoop(std::move(out));
      },
      options);
}

SampledLoop looped_map_derivative(const FiberMap& psi, const SampledLoop& alpha, const SampledLoop& beta,
                                  DifferenceOptions options) {
  if (alpha.dim() != beta.dim() || alpha.resolution() != beta.resolution()) {
    raise(ErrorKind::BaseMismatch, "direction loop does not match the base loop");
  }
  return difference(
      [&](double h) {
        SampledLoop forward = looped_fiber_map(psi, alpha + h * beta);
        SampledLoop backward = looped_fiber_map(psi, alpha - h * beta);
        SampledLoop d = forward - backward;
        d *= 1.0 / (2.0 * h);
        return d;
      },
      options);
}

}  // namespace loopspace
