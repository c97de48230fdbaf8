#include <cmath>
#include <numbers>

#include "loopspace/charts.hpp"
#include "suite_util.hpp"

namespace loopspace::lab::detail {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

// Tolerances fixed by the identities themselves rather than the config.
constexpr double kCocycleTol = 1e-6;
constexpr double kLinearityTol = 1e-6;
constexpr double kConstantChartTol = 1e-8;

}  // namespace

void chart_roundtrip(Context& c, Report& r) {
  const EmbeddedManifold& m = c.manifold;
  const LocalAdditionSpec spec = LocalAdditionSpec::standard(m);
  const double reach = spec.reach();
  MaxResidual inv_fwd, fwd_inv, trans;
  double outside = 0.0;
  for (int i = 0; i < c.trials(100); ++i) {
    const SampledLoop a = c.rng.random_loop(m, c.n());
    const Chart chart(a, spec);
    const TangentSection b = c.rng.random_section(m, a, c.rng.uniform(0.2, 2.0));
    const TangentSection near = c.rng.random_section(m, a, 0.15 * reach);
    const TangentSection small = c.rng.random_section(m, a, c.rng.uniform(0.2, 0.3) * reach);
    inv_fwd.update(attempt([&] {
      const SampledLoop g = chart_forward(chart, b);
      if (!chart_membership(chart, g)) outside += 1.0;
      const TangentSection back = chart_inverse(chart, g);
      fwd_inv.update(sup_distance(chart_forward(chart, back), g));
      return sup_distance(back.vectors(), b.vectors());
    }));
    trans.update(attempt([&] {
      const Chart other(chart_forward(chart, near), spec);
      const TangentSection b12 = transition(chart, other, small);
      return sup_distance(transition(other, chart, b12).vectors(), small.vectors());
    }));
  }
  r.add("psi-inverse-after-psi", "chart map inverse undoes the chart map", inv_fwd, c.oracle_tol());
  r.add("psi-after-psi-inverse", "chart map undoes its inverse on the chart domain", fwd_inv, c.oracle_tol());
  r.add("forward-image-in-domain", "chart images lie in the chart neighbourhood", outside, 0.0);
  r.add("transition-inverse", "opposite transition maps are mutually inverse", trans, c.oracle_tol());
}

void transition_cocycle(Context& c, Report& r) {
  const EmbeddedManifold& m = c.manifold;
  const LocalAdditionSpec spec = LocalAdditionSpec::standard(m);
  const double reach = spec.reach();
  const int n = c.n();
  MaxResidual cocycle, identity, pointwise, lr;
  for (int i = 0; i < c.trials(20); ++i) {
    const SampledLoop a = c.rng.random_loop(m, n);
    const Chart c1(a, spec);
    const TangentSection s2 = c.rng.random_section(m, a, 0.15 * reach);
    const TangentSection s3 = c.rng.random_section(m, a, 0.15 * reach);
    const TangentSection b = c.rng.random_section(m, a, 0.2 * reach);
    const int node = c.rng.integer(0, n - 1);
    const Eigen::VectorXd bump = c.rng.random_tangent(m, a.node(node), 0.05 * reach);
    const TangentSection dir = c.rng.random_section(m, a, 1.0);
    const SampledLoop nu = c.rng.trig_series(1, 3, 1.0).sample(n);
    cocycle.update(attempt([&] {
      const Chart c2(chart_forward(c1, s2), spec), c3(chart_forward(c1, s3), spec);
      const TangentSection b12 = transition(c1, c2, b);
      const TangentSection b13 = transition(c1, c3, b);
      return sup_distance(transition(c2, c3, b12).vectors(), b13.vectors());
    }));
    identity.update(attempt([&] { return sup_distance(transition(c1, c1, b).vectors(), b.vectors()); }));
    pointwise.update(attempt([&] {
      const Chart c2(chart_forward(c1, s2), spec);
      Eigen::MatrixXd changed = b.vectors().samples();
      changed.col(node) += bump;
      const TangentSection t1 = transition(c1, c2, b);
      const TangentSection t2 = transition(c1, c2, TangentSection(m, a, SampledLoop(changed)));
      double worst = 0.0;
      for (int j = 0; j < n; ++j)
        if (j != node) worst = std::max(worst, (t1.vectors().node(j) - t2.vectors().node(j)).norm());
      return worst;
    }));
    lr.update(attempt([&] {
      const Chart c2(chart_forward(c1, s2), spec);
      auto dphi = [&](const SampledLoop& d) {
        const double h = 1e-5;
        const TangentSection plus(m, a, b.vectors() + h * d), minus(m, a, b.vectors() - h * d);
        return (1.0 / (2.0 * h)) * (transition(c1, c2, plus).vectors() - transition(c1, c2, minus).vectors());
      };
      return sup_distance(dphi(pointwise_scale(nu, dir.vectors())), pointwise_scale(nu, dphi(dir.vectors())));
    }));
  }
  MaxResidual constant;
  for (int i = 0; i < 10; ++i) {
    const Point x = c.rng.random_point(m);
    const Eigen::VectorXd v = c.rng.random_tangent(m, x, c.rng.uniform(0.1, 2.0));
    constant.update(attempt([&] {
      const Chart chart(constant_loop(x, n), spec);
      const SampledLoop g = chart_forward(chart, TangentSection(m, constant_loop(x, n), constant_loop(v, n)));
      return sup_distance(g, constant_loop(local_addition(spec, {x, v}), n));
    }));
  }
  r.add("cocycle", "transition maps compose along three overlapping charts", cocycle, kCocycleTol);
  r.add("self-transition-identity", "the transition from a chart to itself is the identity", identity,
        c.oracle_tol());
  r.add("transition-pointwise", "transition maps act node by node", pointwise, 0.0);
  r.add("transition-derivative-lr-linear", "derivatives of transition maps commute with scalar loops", lr,
        c.fd_tol());
  r.add("constant-chart-is-manifold-chart", "constant loops embed the manifold chart", constant,
        kConstantChartTol);
}

void vertical_derivative_suite(Context& c, Report& r) {
  const int n = c.n();
  const int d = 3;
  MaxResidual looped_vs_pointwise, pointwise_vs_analytic, looped_vs_analytic, lr, additive;
  for (int i = 0; i < c.trials(50); ++i) {
    // psi(t, v) = A(t) v + c * sin(W(t) v) + b(t) with analytic Jacobian.
    const Eigen::MatrixXd a0 = 0.5 * Eigen::MatrixXd::NullaryExpr(d, d, [&] { return c.rng.normal(); });
    const Eigen::MatrixXd a1 = 0.3 * Eigen::MatrixXd::NullaryExpr(d, d, [&] { return c.rng.normal(); });
    const Eigen::MatrixXd w0 = 0.5 * Eigen::MatrixXd::NullaryExpr(d, d, [&] { return c.rng.normal(); });
    const Eigen::MatrixXd w1 = 0.3 * Eigen::MatrixXd::NullaryExpr(d, d, [&] { return c.rng.normal(); });
    const Eigen::VectorXd amp = c.rng.normal_vector(d);
    const TrigSeries shift = c.rng.trig_series(d, 2, 1.0);
    auto A = [&](double t) { return Eigen::MatrixXd(a0 + std::cos(kTwoPi * t) * a1); };
    auto W = [&](double t) { return Eigen::MatrixXd(w0 + std::sin(kTwoPi * t) * w1); };
    const FiberMap psi = [&](double t, const Point& v) {
      const Eigen::VectorXd wv = W(t) * v;
      return Point(A(t) * v + amp.cwiseProduct(wv.array().sin().matrix()) + shift(t));
    };
    auto jac = [&](double t, const Point& v) {
      const Eigen::VectorXd wv = W(t) * v;
      return Eigen::MatrixXd(A(t) + (amp.array() * wv.array().cos()).matrix().asDiagonal() * W(t));
    };
    const SampledLoop alpha = c.rng.trig_series(d, 3, 1.0).sample(n);
    const SampledLoop beta = c.rng.trig_series(d, 3, 1.0).sample(n);
    const SampledLoop beta2 = c.rng.trig_series(d, 3, 1.0).sample(n);
    const SampledLoop nu = c.rng.trig_series(1, 3, 1.0).sample(n);

    const SampledLoop looped = looped_map_derivative(psi, alpha, beta);
    const SampledLoop pointwise = vertical_derivative(psi, alpha, beta);
    const SampledLoop analytic = SampledLoop::from_function(d, n, [&](double t) {
      const int j = static_cast<int>(std::lround(t * n));
      return Eigen::VectorXd(jac(t, alpha.node(j)) * beta.node(j));
    });
    looped_vs_pointwise.update(sup_distance(looped, pointwise));
    pointwise_vs_analytic.update(sup_distance(pointwise, analytic));
    looped_vs_analytic.update(sup_distance(looped, analytic));
    lr.update(sup_distance(looped_map_derivative(psi, alpha, pointwise_scale(nu, beta)),
                           pointwise_scale(nu, looped)));
    additive.update(sup_distance(looped_map_derivative(psi, alpha, beta + beta2),
                                 looped + looped_map_derivative(psi, alpha, beta2)));
  }

  MaxResidual examples;
  {
    const Eigen::Matrix3d lin = Eigen::Matrix3d::NullaryExpr([&] { return c.rng.normal(); });
    const SampledLoop alpha = c.rng.trig_series(3, 3, 1.0).sample(n);
    const SampledLoop beta = c.rng.trig_series(3, 3, 1.0).sample(n);
    const SampledLoop dl = vertical_derivative([&](double, const Point& v) { return Point(lin * v); }, alpha, beta);
    for (int j = 0; j < n; ++j) examples.update((dl.node(j) - lin * beta.node(j)).norm());
    const SampledLoop a1 = c.rng.trig_series(1, 3, 1.0).sample(n);
    const SampledLoop b1 = c.rng.trig_series(1, 3, 1.0).sample(n);
    const SampledLoop dq =
        vertical_derivative([](double, const Point& v) { return Point(v + v.cwiseProduct(v)); }, a1, b1);
    for (int j = 0; j < n; ++j) {
      const double expect = b1.node(j)(0) + 2.0 * a1.node(j)(0) * b1.node(j)(0);
      examples.update(std::abs(dq.node(j)(0) - expect));
    }
  }
  r.add("looped-vs-pointwise", "the derivative of a looped map is the loop of the vertical derivative",
        looped_vs_pointwise, c.fd_tol());
  r.add("pointwise-vs-analytic", "vertical derivative matches the analytic fibre Jacobian",
        pointwise_vs_analytic, c.fd_tol());
  r.add("looped-vs-analytic", "looped derivative matches the loop of fibre Jacobians", looped_vs_analytic,
        c.fd_tol());
  r.add("lr-linearity", "the looped derivative commutes with the scalar loop ring", lr, kLinearityTol);
  r.add("additivity", "the looped derivative is additive in the direction", additive, kLinearityTol);
  r.add("closed-form-examples", "vertical derivatives of linear and quadratic fibre maps", examples,
        c.oracle_tol());
}

void tangent_identification(Context& c, Report& r) {
  const EmbeddedManifold& m = c.manifold;
  const LocalAdditionSpec spec = LocalAdditionSpec::standard(m);
  const int n = c.n();
  const double h = 1e-4;
  MaxResidual curve, tangency, coords, module;
  for (int i = 0; i < c.trials(20); ++i) {
    const SampledLoop a = c.rng.random_loop(m, n);
    const Chart chart(a, spec);
    const TangentSection b = c.rng.random_section(m, a, c.rng.uniform(0.3, 1.5));
    const SampledLoop nu = c.rng.trig_series(1, 3, 1.0).sample(n);
    const double s0 = c.rng.uniform(0.2, 0.8);
    auto at = [&](double s, const SampledLoop& dir) { return chart_forward(chart, TangentSection(m, a, s * dir)); };
    curve.update(attempt([&] {
      // The curve s -> Psi_alpha(s beta) differentiated as a curve of whole loops.
      const SampledLoop fd = (0.5 / h) * (at(s0 + h, b.vectors()) - at(s0 - h, b.vectors()));
      const SampledLoop here = at(s0, b.vectors());
      double worst = 0.0, normal = 0.0;
      for (int j = 0; j < n; ++j) {
        const Point p = a.node(j);
        const Eigen::VectorXd v = b.vectors().node(j);
        const double len = v.norm();
        Eigen::VectorXd expect;
        if (len == 0.0) {
          expect = spec.epsilon * spec.compression.derivative(0.0) * v;
        } else {
          const Eigen::VectorXd u = v / len;
          const double theta = spec.epsilon * spec.compression(s0 * len);
          const double dtheta = spec.epsilon * spec.compression.derivative(s0 * len) * len;
          expect = dtheta * m.transport_closed(p, theta * u, u);
        }
        worst = std::max(worst, (fd.node(j) - expect).norm());
        const Eigen::VectorXd fdj = fd.node(j);
        normal = std::max(normal, (fdj - m.tangent_projector(here.node(j)) * fdj).norm());
      }
      tangency.update(normal);
      return worst;
    }));
    coords.update(attempt([&] {
      const TangentSection up = chart_inverse(chart, at(s0 + h, b.vectors()));
      const TangentSection down = chart_inverse(chart, at(s0 - h, b.vectors()));
      return sup_distance((0.5 / h) * (up.vectors() - down.vectors()), b.vectors());
    }));
    module.update(attempt([&] {
      const SampledLoop scaled = pointwise_scale(nu, b.vectors());
      const SampledLoop d_scaled = (0.5 / h) * (at(h, scaled) - at(-h, scaled));
      const SampledLoop d_plain = (0.5 / h) * (at(h, b.vectors()) - at(-h, b.vectors()));
      return sup_distance(d_scaled, pointwise_scale(nu, d_plain));
    }));
  }
  r.add("curve-derivative", "derivative of a curve of loops is the loop of pointwise derivatives", curve,
        c.fd_tol());
  r.add("derivative-is-tangent", "curve derivatives are sections of the pulled-back tangent bundle",
        tangency, c.fd_tol());
  r.add("chart-coordinates", "in chart coordinates the tangent vector is the section itself", coords,
        c.fd_tol());
  r.add("lr-module", "the identification of tangent spaces is linear over scalar loops", module, c.fd_tol());
}

}  // namespace loopspace::lab::detail
