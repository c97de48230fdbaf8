#include <Eigen/Geometry>

#include <cmath>
#include <numbers>

#include "loopspace/geometry.hpp"
#include "loopspace/matrix_loop.hpp"
#include "suite_util.hpp"

namespace loopspace::lab::detail {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kTwoPi = 2.0 * kPi;

constexpr double kFrameInvarianceTol = 1e-9;
constexpr double kChristoffelTol = 1e-4;
constexpr double kCompatibilityTol = 1e-5;
constexpr double kTorsionFdTol = 1e-4;
constexpr double kFrameTol = 1e-8;
constexpr double kRotationFrameTol = 1e-10;
constexpr double kJumpFloor = 1.0;
constexpr double kSmoothCeiling = 0.1;

Eigen::Vector3d as3(const Eigen::VectorXd& v) { return {v(0), v(1), v(2)}; }

Connection cross_torsion_connection() {
  return Connection::flat_with_torsion(3, [](const Eigen::VectorXd& u, const Eigen::VectorXd& v) {
    return Eigen::VectorXd(as3(u).cross(as3(v)));
  });
}

// A product of plane rotations in tangent coordinates with angles theta_pq(t).
Eigen::MatrixXd tangent_rotation(int k, const std::vector<TrigSeries>& angles, double t) {
  Eigen::MatrixXd q = Eigen::MatrixXd::Identity(k, k);
  std::size_t idx = 0;
  for (int a = 0; a < k; ++a)
    for (int b = a + 1; b < k; ++b) {
      const double th = angles[idx++](t)(0);
      Eigen::MatrixXd g = Eigen::MatrixXd::Identity(k, k);
      g(a, a) = g(b, b) = std::cos(th);
      g(a, b) = -std::sin(th);
      g(b, a) = std::sin(th);
      q = g * q;
    }
  return q;
}

// A path of loops on S^2 in spherical coordinates with a tangent field, for
// an oracle built from the Christoffel symbols of the round metric.
struct SphericalFamily {
  double th0, a1, a2, a3, ph0, b1, b2, b3, c0, c1, c2, d0, d1;

  static SphericalFamily draw(Sampler& rng) {
    return {rng.uniform(1.2, 1.9), rng.uniform(0.1, 0.25), rng.uniform(-0.3, 0.3), rng.uniform(-0.1, 0.1),
            rng.uniform(0.0, kTwoPi), rng.uniform(0.1, 0.4), rng.uniform(-0.8, 0.8), rng.uniform(-0.2, 0.2),
            rng.uniform(-0.5, 0.5), rng.uniform(0.1, 0.3), rng.uniform(-0.2, 0.2), rng.uniform(-0.5, 0.5),
            rng.uniform(0.1, 0.6)};
  }
  double th(double s, double t) const { return th0 + a1 * std::sin(kTwoPi * t) + a2 * s + a3 * s * s; }
  double ph(double s, double t) const { return ph0 + b1 * std::cos(kTwoPi * t) + b2 * s + b3 * s * s * s; }
  double a(double s, double t) const { return c0 + c1 * std::cos(kTwoPi * t + s) + c2 * s; }
  double b(double s, double t) const { return d0 + d1 * std::sin(kTwoPi * t) * std::cos(s); }

  static Eigen::Vector3d point(double th, double ph) {
    return {std::sin(th) * std::cos(ph), std::sin(th) * std::sin(ph), std::cos(th)};
  }
  static Eigen::Vector3d e_th(double th, double ph) {
    return {std::cos(th) * std::cos(ph), std::cos(th) * std::sin(ph), -std::sin(th)};
  }
  static Eigen::Vector3d e_ph(double th, double ph) {
    return {-std::sin(th) * std::sin(ph), std::sin(th) * std::cos(ph), 0.0};
  }
  Eigen::Vector3d field(double s, double t) const {
    return a(s, t) * e_th(th(s, t), ph(s, t)) + b(s, t) * e_ph(th(s, t), ph(s, t));
  }
  /// Covariant s-derivative of the field from the Christoffel symbols
  /// Gamma^th_phph = -sin cos, Gamma^ph_thph = cot, with s-derivatives by
  /// central differences of the coordinate functions.
  Eigen::Vector3d oracle(double s, double t) const {
    const double h = 1e-5;
    auto dd = [&](auto f) { return (f(s + h) - f(s - h)) / (2 * h); };
    const double T = th(s, t), P = ph(s, t), A = a(s, t), B = b(s, t);
    const double thd = dd([&](double x) { return th(x, t); });
    const double phd = dd([&](double x) { return ph(x, t); });
    const double ad = dd([&](double x) { return a(x, t); });
    const double bd = dd([&](double x) { return b(x, t); });
    const double comp_th = ad - std::sin(T) * std::cos(T) * phd * B;
    const double comp_ph = bd + std::cos(T) / std::sin(T) * (thd * B + phd * A);
    return comp_th * e_th(T, P) + comp_ph * e_ph(T, P);
  }
};

double fd_torsion(const Connection& conn, const Point& p, const Eigen::VectorXd& a1, const Eigen::MatrixXd& B1,
                  const Eigen::VectorXd& a2, const Eigen::MatrixXd& B2) {
  // X, Y are the tangential parts of affine ambient fields; T(X, Y) is
  // estimated as K(Y; D_X Y) - K(X; D_Y X) - [X, Y].
  const double h = 1e-5;
  const EmbeddedManifold& m = conn.manifold();
  auto X = [&](const Point& x) -> Eigen::VectorXd { return m.tangent_projector(x) * (a1 + B1 * x); };
  auto Y = [&](const Point& x) -> Eigen::VectorXd { return m.tangent_projector(x) * (a2 + B2 * x); };
  auto dir = [&](auto F, const Eigen::VectorXd& v) -> Eigen::VectorXd {
    return (F(p + h * v) - F(p - h * v)) / (2 * h);
  };
  const Eigen::VectorXd x = X(p), y = Y(p);
  const Eigen::VectorXd dyx = dir(Y, x), dxy = dir(X, y);
  const Eigen::VectorXd est = conn.connector(p, y, x, dyx) - conn.connector(p, x, y, dxy) - (dyx - dxy);
  return (est - conn.torsion_at(p, x, y)).norm();
}

}  // namespace

void metric(Context& c, Report& r) {
  const EmbeddedManifold& m = c.manifold;
  const int n = c.n();
  const int k = m.intrinsic_dim();
  MaxResidual examples, symmetry, bilinear, invariance, rotation, isometry, quadrature;
  double nonpositive = 0.0;
  {
    const Point x = c.rng.random_point(m);
    const Eigen::VectorXd v = c.rng.random_tangent(m, x, 1.0);
    const TangentSection unit(m, constant_loop(x, n), constant_loop(v, n));
    examples.update(std::abs(l2_inner(unit, unit) - 1.0));
    const auto f2 = EmbeddedManifold::flat(2);
    const TangentSection circ(f2, SampledLoop::zero(2, n), SampledLoop::from_function(2, n, [](double t) {
                                return Eigen::Vector2d(std::cos(kTwoPi * t), std::sin(kTwoPi * t));
                              }));
    examples.update(std::abs(l2_inner(circ, circ) - 1.0));
  }
  const Connection lc = Connection::levi_civita(m);
  for (int i = 0; i < c.trials(20); ++i) {
    const SampledLoop a = c.rng.random_loop(m, n);
    const TangentSection b = c.rng.random_section(m, a, c.rng.uniform(0.2, 2.0));
    const TangentSection g = c.rng.random_section(m, a, c.rng.uniform(0.2, 2.0));
    const TangentSection b2 = c.rng.random_section(m, a, 1.0);
    const double scale = c.rng.normal();
    const double bg = l2_inner(b, g);
    symmetry.update(std::abs(bg - l2_inner(g, b)));
    bilinear.update(std::abs(l2_inner(TangentSection(m, a, scale * b.vectors() + b2.vectors()), g) -
                             (scale * bg + l2_inner(b2, g))));
    if (!(l2_inner(b, b) > 0.0)) nonpositive += 1.0;

    std::vector<TrigSeries> angles;
    for (int p = 0; p < k * (k - 1) / 2; ++p) angles.push_back(c.rng.trig_series(1, 3, 1.0));
    Eigen::MatrixXd rb(m.ambient_dim(), n), rg(m.ambient_dim(), n);
    for (int j = 0; j < n; ++j) {
      const Eigen::MatrixXd e = m.tangent_basis(a.node(j));
      const Eigen::MatrixXd q = tangent_rotation(k, angles, a.time(j));
      rb.col(j) = e * q * e.transpose() * b.vectors().node(j);
      rg.col(j) = e * q * e.transpose() * g.vectors().node(j);
    }
    invariance.update(std::abs(l2_inner(TangentSection(m, a, SampledLoop(rb)), TangentSection(m, a, SampledLoop(rg))) - bg));

    const double s = c.rng.integer(1, n - 1) / static_cast<double>(n);
    rotation.update(std::abs(l2_inner(TangentSection(m, rotate(a, s), rotate(b.vectors(), s)),
                                      TangentSection(m, rotate(a, s), rotate(g.vectors(), s))) - bg));
    isometry.update(attempt([&] {
      const LoopPath path = loop_geodesic(lc, c.rng.random_section(m, a, 1.0), 1.0, c.cfg.ode_steps);
      const TangentSection moved = loop_parallel_transport(lc, path, b);
      return std::abs(l2_inner(moved, moved) - l2_inner(b, b));
    }));
  }
  {
    // Trapezoid quadrature is exact on trigonometric polynomials of low degree.
    const auto f = EmbeddedManifold::flat(3);
    const TrigSeries p = c.rng.trig_series(3, 3, 1.0), q = c.rng.trig_series(3, 3, 1.0);
    double exact = p.mean.dot(q.mean);
    for (std::size_t i = 0; i < p.cos_coeffs.size(); ++i)
      exact += 0.5 * (p.cos_coeffs[i].dot(q.cos_coeffs[i]) + p.sin_coeffs[i].dot(q.sin_coeffs[i]));
    const SampledLoop zero = SampledLoop::zero(3, n);
    quadrature.update(std::abs(l2_inner(TangentSection(f, zero, p.sample(n)), TangentSection(f, zero, q.sample(n))) - exact));
  }
  r.add("examples", "integration pairing of sections: unit examples", examples, c.oracle_tol());
  r.add("symmetry", "the L2 pairing is symmetric", symmetry, 0.0);
  r.add("bilinearity", "the L2 pairing is bilinear", bilinear, c.oracle_tol());
  r.add("positivity", "the L2 pairing is positive on nonzero sections", nonpositive, 0.0);
  r.add("orthogonal-frame-invariance", "loops of orthogonal frames preserve the L2 pairing", invariance,
        kFrameInvarianceTol);
  r.add("circle-action-invariance", "rotating the circle preserves the L2 pairing", rotation, c.oracle_tol());
  r.add("transport-isometry", "loop parallel transport is an L2 isometry", isometry, c.oracle_tol());
  r.add("trig-quadrature", "the pairing is exact on trigonometric polynomials", quadrature, c.oracle_tol());
}

void covderiv_adjoint(Context& c, Report& r) {
  c.require({ManifoldKind::Sphere});
  const EmbeddedManifold& m = c.manifold;
  const Connection lc = Connection::levi_civita(m);
  const int n = c.n(), T = c.cfg.path_grid;
  const SphericalFamily fam = SphericalFamily::draw(c.rng);
  std::vector<SampledLoop> loops;
  PathField v, w;
  for (int i = 0; i <= T; ++i) {
    const double s = static_cast<double>(i) / T;
    loops.push_back(SampledLoop::from_function(3, n, [&](double t) {
      return Eigen::VectorXd(SphericalFamily::point(fam.th(s, t), fam.ph(s, t)));
    }));
    v.push_back(SampledLoop::from_function(3, n, [&](double t) { return Eigen::VectorXd(fam.field(s, t)); }));
    w.push_back(SampledLoop::from_function(3, n, [&](double t) {
      const double th = fam.th(s, t), ph = fam.ph(s, t);
      return Eigen::VectorXd(std::cos(3 * s + t) * SphericalFamily::e_ph(th, ph) + s * SphericalFamily::e_th(th, ph));
    }));
  }
  const LoopPath path(m, loops);
  const PathField dv = cov_deriv_along_path(lc, path, v);
  const PathField dw = cov_deriv_along_path(lc, path, w);

  MaxResidual oracle, nodewise, compat;
  for (int probe = 0; probe < 10; ++probe) {
    const int i = c.rng.integer(0, T), j = c.rng.integer(0, n - 1);
    const double s = static_cast<double>(i) / T, t = static_cast<double>(j) / n;
    oracle.update((dv[static_cast<std::size_t>(i)].node(j) - fam.oracle(s, t)).norm());
  }
  for (int probe = 0; probe < 5; ++probe) {
    // The same node trace carried by a path of constant loops.
    const int j = c.rng.integer(0, n - 1);
    std::vector<SampledLoop> trace;
    PathField field;
    for (int i = 0; i <= T; ++i) {
      trace.push_back(constant_loop(loops[static_cast<std::size_t>(i)].node(j), 8));
      field.push_back(constant_loop(v[static_cast<std::size_t>(i)].node(j), 8));
    }
    const PathField d = cov_deriv_along_path(lc, LoopPath(m, trace), field);
    for (int i = 0; i <= T; ++i)
      nodewise.update((d[static_cast<std::size_t>(i)].node(0) - dv[static_cast<std::size_t>(i)].node(j)).norm());
  }
  {
    PathField inner;
    for (int i = 0; i <= T; ++i) {
      Eigen::MatrixXd row(1, n);
      const auto k = static_cast<std::size_t>(i);
      for (int j = 0; j < n; ++j) row(0, j) = v[k].node(j).dot(w[k].node(j));
      inner.emplace_back(row);
    }
    const PathField d_inner = path_time_derivative(inner, path.spacing());
    for (int i = 0; i <= T; ++i) {
      const auto k = static_cast<std::size_t>(i);
      for (int j = 0; j < n; ++j) {
        const double rhs = dv[k].node(j).dot(w[k].node(j)) + v[k].node(j).dot(dw[k].node(j));
        compat.update(std::abs(d_inner[k].node(j)(0) - rhs));
      }
    }
  }
  MaxResidual product;
  {
    const auto f = EmbeddedManifold::flat(3);
    const SampledLoop sec = c.rng.trig_series(3, 3, 1.0).sample(n);
    std::vector<SampledLoop> base;
    PathField field;
    for (int i = 0; i <= T; ++i) {
      const double s = static_cast<double>(i) / T;
      base.push_back(SampledLoop::zero(3, n));
      field.push_back((s * s * s) * sec);
    }
    const PathField d = cov_deriv_along_path(Connection::levi_civita(f), LoopPath(f, base), field);
    for (int i = 0; i <= T; ++i) {
      const double s = static_cast<double>(i) / T;
      product.update(sup_distance(d[static_cast<std::size_t>(i)], (3.0 * s * s) * sec));
    }
  }
  const double coarse = expect_error(ErrorKind::GridTooCoarse, [&] {
    std::vector<SampledLoop> few(loops.begin(), loops.begin() + 4);
    PathField fv(v.begin(), v.begin() + 4);
    (void)cov_deriv_along_path(lc, LoopPath(m, few), fv);
  });
  r.add("christoffel-oracle", "the looped connector agrees with the Christoffel covariant derivative", oracle,
        kChristoffelTol);
  r.add("nodewise-agreement", "the connector of the loop bundle is the loop of the connector", nodewise,
        c.oracle_tol());
  r.add("metric-compatibility", "the looped Levi-Civita derivative is metric compatible", compat,
        kCompatibilityTol);
  r.add("flat-product-rule", "flat covariant derivative of a scaled section", product, c.oracle_tol());
  r.add("grid-too-coarse", "path grids below four intervals are rejected", coarse, 0.0);
}

void geodesic_pointwise(Context& c, Report& r) {
  const EmbeddedManifold& m = c.manifold;
  const Connection lc = Connection::levi_civita(m);
  const int n = c.n(), steps = c.cfg.ode_steps;
  MaxResidual oracle, energy, equation;
  for (int i = 0; i < c.trials(10); ++i) {
    const SampledLoop a = c.rng.random_loop(m, n);
    const TangentSection nu = c.rng.random_section(m, a, c.rng.uniform(0.5, 2.0));
    const double worst = attempt([&] {
      const LoopPath p = loop_geodesic(lc, nu, 1.0, steps);
      double res = 0.0;
      for (int step = 0; step <= steps; step += std::max(1, steps / 10)) {
        const double s = static_cast<double>(step) / steps;
        for (int j = 0; j < n; ++j)
          res = std::max(res, (p.at(step).node(j) - m.exp_closed(a.node(j), s * nu.vectors().node(j))).norm());
      }
      for (int j = 0; j < n; ++j)
        res = std::max(res, (p.back().node(j) - m.exp_closed(a.node(j), nu.vectors().node(j))).norm());
      const PathField vel = path_velocity(p);
      const double e0 = l2_inner(nu, nu);
      for (std::size_t q = 0; q < vel.size(); ++q) {
        const TangentSection vq = TangentSection::project(m, p.at(static_cast<int>(q)), vel[q]);
        energy.update(std::abs(l2_inner(vq, vq) - e0));
      }
      const PathField acc = cov_deriv_along_path(lc, p, vel);
      for (std::size_t q = 2; q + 2 < acc.size(); ++q) equation.update(sup_norm(acc[q]));
      return res;
    });
    if (std::isnan(worst)) {
      energy.fail();
      equation.fail();
    }
    oracle.update(worst);
  }
  r.add("pointwise-exp-oracle", "evaluating a loop geodesic gives the manifold geodesic", oracle, c.oracle_tol());
  r.add("energy-drift", "the L2 energy is constant along loop geodesics", energy, c.fd_tol());
  r.add("geodesic-equation", "the covariant acceleration of a loop geodesic vanishes", equation, c.fd_tol());
  if (m.kind() == ManifoldKind::Sphere) {
    const SampledLoop north = constant_loop(Eigen::Vector3d(0, 0, 1), n);
    const double res = attempt([&] {
      const TangentSection nu(m, north, constant_loop(Eigen::Vector3d(kPi / 2, 0, 0), n));
      return sup_distance(loop_geodesic(lc, nu, 1.0, steps).back(), constant_loop(Eigen::Vector3d(1, 0, 0), n));
    });
    r.add("quarter-turn-example", "geodesic of a constant loop from the north pole", res, c.oracle_tol());
  }
}

void transport_pointwise(Context& c, Report& r) {
  const EmbeddedManifold& m = c.manifold;
  const Connection lc = Connection::levi_civita(m);
  const int n = c.n(), steps = c.cfg.ode_steps;
  const LocalAdditionSpec spec = LocalAdditionSpec::standard(m);
  MaxResidual oracle, evaluation, isometry;
  for (int i = 0; i < c.trials(10); ++i) {
    const SampledLoop a = c.rng.random_loop(m, n);
    const TangentSection nu = c.rng.random_section(m, a, c.rng.uniform(0.5, 1.5));
    const TangentSection sigma = c.rng.random_section(m, a, 1.0);
    const TangentSection beta = c.rng.random_section(m, a, 1.0);
    oracle.update(attempt([&] {
      const TangentSection out = loop_parallel_transport(lc, loop_geodesic(lc, nu, 1.0, steps), sigma);
      double res = 0.0;
      for (int j = 0; j < n; ++j) {
        const Point expect = m.transport_closed(a.node(j), nu.vectors().node(j), sigma.vectors().node(j));
        res = std::max(res, (out.vectors().node(j) - expect).norm());
      }
      isometry.update(std::abs(l2_inner(out, out) - l2_inner(sigma, sigma)));
      return res;
    }));
    evaluation.update(attempt([&] {
      // A non-geodesic path: s -> Psi_alpha(s beta) on the path grid.
      const Chart chart(a, spec);
      std::vector<SampledLoop> loops;
      for (int q = 0; q <= c.cfg.path_grid; ++q) {
        const double s = static_cast<double>(q) / c.cfg.path_grid;
        loops.push_back(chart_forward(chart, TangentSection(m, a, s * beta.vectors())));
      }
      const LoopPath path(m, loops);
      const TangentSection out = loop_parallel_transport(lc, path, sigma);
      double res = 0.0;
      for (int j = 0; j < n; ++j) {
        const std::vector<Point> trace = path.node_trace(j);
        const Eigen::VectorXd expect = parallel_transport(m, trace, sigma.vectors().node(j));
        res = std::max(res, (out.vectors().node(j) - expect).norm());
      }
      return res;
    }));
  }
  r.add("transport-vs-closed-form", "loop transport along a geodesic matches closed-form transport", oracle,
        c.oracle_tol());
  r.add("commutes-with-evaluation", "loop transport corresponds to transport under evaluation maps", evaluation,
        c.oracle_tol());
  r.add("l2-isometry", "loop transport preserves the L2 norm", isometry, c.oracle_tol());
  if (m.kind() == ManifoldKind::Sphere) {
    const double res = attempt([&] {
      std::vector<SampledLoop> loops;
      for (int i = 0; i <= steps; ++i) {
        const double th = (kPi / 2) * i / steps;
        loops.push_back(constant_loop(Eigen::Vector3d(std::sin(th), 0, std::cos(th)), n));
      }
      const LoopPath p(m, loops);
      const TangentSection sigma(m, p.front(), constant_loop(Eigen::Vector3d(0, 1, 0), n));
      return sup_distance(loop_parallel_transport(lc, p, sigma).vectors(), constant_loop(Eigen::Vector3d(0, 1, 0), n));
    });
    r.add("quarter-circle-example", "transport along a quarter great circle", res, c.oracle_tol());
  }
}

void torsion_loop(Context& c, Report& r) {
  const EmbeddedManifold& m = c.manifold;
  const int n = c.n();
  const auto f = EmbeddedManifold::flat(3);
  const Connection tc = cross_torsion_connection();
  const Connection lc = Connection::levi_civita(m);
  MaxResidual looped, antisym, lc_zero, lc_fd, tc_fd;
  for (int i = 0; i < c.trials(10); ++i) {
    const SampledLoop fa = c.rng.random_loop(f, n);
    const TangentSection fb = c.rng.random_section(f, fa, 1.0), fg = c.rng.random_section(f, fa, 1.0);
    const TangentSection t = torsion(tc, fb, fg);
    for (int j = 0; j < n; ++j) {
      const Eigen::Vector3d expect = as3(fb.vectors().node(j)).cross(as3(fg.vectors().node(j)));
      looped.update((t.vectors().node(j) - Eigen::VectorXd(expect)).cwiseAbs().maxCoeff());
    }
    antisym.update(sup_distance(torsion(tc, fg, fb).vectors(), -t.vectors()));
    const SampledLoop a = c.rng.random_loop(m, n);
    const TangentSection b = c.rng.random_section(m, a, 1.0), g = c.rng.random_section(m, a, 1.0);
    lc_zero.update(sup_norm(torsion(lc, b, g).vectors()));
  }
  for (int probe = 0; probe < 5; ++probe) {
    const int k = m.ambient_dim();
    const Point p = c.rng.random_point(m);
    const Eigen::VectorXd a1 = c.rng.normal_vector(k), a2 = c.rng.normal_vector(k);
    const Eigen::MatrixXd B1 = Eigen::MatrixXd::NullaryExpr(k, k, [&] { return c.rng.uniform(-1.0, 1.0); });
    const Eigen::MatrixXd B2 = Eigen::MatrixXd::NullaryExpr(k, k, [&] { return c.rng.uniform(-1.0, 1.0); });
    lc_fd.update(fd_torsion(lc, p, a1, B1, a2, B2));
    const Point q = c.rng.normal_vector(3);
    const Eigen::VectorXd u1 = c.rng.normal_vector(3), u2 = c.rng.normal_vector(3);
    const Eigen::MatrixXd C1 = Eigen::MatrixXd::NullaryExpr(3, 3, [&] { return c.rng.uniform(-1.0, 1.0); });
    const Eigen::MatrixXd C2 = Eigen::MatrixXd::NullaryExpr(3, 3, [&] { return c.rng.uniform(-1.0, 1.0); });
    tc_fd.update(fd_torsion(tc, q, u1, C1, u2, C2));
  }
  MaxResidual rotation;
  {
    // Along a straight line with velocity w the transport solves V' = -w x V / 2.
    const Eigen::Vector3d w = c.rng.normal_vector(3);
    const Eigen::Vector3d v0 = c.rng.normal_vector(3);
    std::vector<SampledLoop> loops;
    const int steps = c.cfg.ode_steps;
    for (int i = 0; i <= steps; ++i) loops.push_back(constant_loop(Eigen::VectorXd((i / static_cast<double>(steps)) * w), 8));
    const TangentSection sigma(f, loops.front(), constant_loop(v0, 8));
    const TangentSection out = loop_parallel_transport(tc, LoopPath(f, loops), sigma);
    const Eigen::Vector3d expect = Eigen::AngleAxisd(-0.5 * w.norm(), w.normalized()) * v0;
    rotation.update(sup_distance(out.vectors(), constant_loop(Eigen::VectorXd(expect), 8)));
  }
  r.add("looped-equals-pointwise", "torsion of the looped connection is the loop of the torsion", looped, 0.0);
  r.add("antisymmetry", "torsion is antisymmetric", antisym, 0.0);
  r.add("levi-civita-torsion-free", "a torsion-free connection loops to a torsion-free connection", lc_zero, 0.0);
  r.add("levi-civita-fd-torsion", "finite-difference torsion of the Levi-Civita connection vanishes", lc_fd,
        kTorsionFdTol);
  r.add("torsion-connection-fd", "finite-difference torsion matches the prescribed tensor", tc_fd, kTorsionFdTol);
  r.add("torsion-transport-rotation", "transport with cross-product torsion rotates about the velocity", rotation,
        c.oracle_tol());
}

void frame_extract(Context& c, Report& r) {
  const int n = c.n(), dim = 3;
  MaxResidual recon, probe;
  for (int i = 0; i < c.trials(20); ++i) {
    std::vector<TrigSeries> entries;
    for (int e = 0; e < dim * dim; ++e) entries.push_back(c.rng.trig_series(1, 3, 0.3));
    auto value = [&](double t) {
      Eigen::MatrixXd g = 2.0 * Eigen::MatrixXd::Identity(dim, dim);
      for (int e = 0; e < dim * dim; ++e) g(e / dim, e % dim) += entries[static_cast<std::size_t>(e)](t)(0);
      return g;
    };
    const MatrixLoop gamma =
        MatrixLoop::from_function(dim, n, [&](double t) { return Eigen::MatrixXcd(value(t).cast<std::complex<double>>()); });
    const SectionOperator g = [&](const SampledLoop& x) { return apply_pointwise(gamma, x); };
    recon.update(attempt([&] {
      const MatrixLoop got = frame_from_module_map(g, dim, n);
      double res = 0.0;
      for (int j = 0; j < n; ++j) res = std::max(res, (got.at(j) - gamma.at(j)).cwiseAbs().maxCoeff());
      for (int q = 0; q < 10; ++q) {
        const SampledLoop x = c.rng.trig_series(dim, 4, 1.0).sample(n);
        probe.update(sup_distance(apply_pointwise(got, x), g(x)));
      }
      return res;
    }));
  }
  const MatrixLoop rot = MatrixLoop::from_function(2, n, [](double t) {
    Eigen::MatrixXcd q(2, 2);
    q << std::cos(kTwoPi * t), -std::sin(kTwoPi * t), std::sin(kTwoPi * t), std::cos(kTwoPi * t);
    return q;
  });
  const double rot_res = attempt([&] {
    const MatrixLoop got = frame_from_module_map([&](const SampledLoop& x) { return apply_pointwise(rot, x); }, 2, n);
    double res = 0.0;
    for (int j = 0; j < n; ++j) res = std::max(res, (got.at(j) - rot.at(j)).norm());
    return res;
  });
  const double conv = expect_error(ErrorKind::NotPointwiseLinear, [&] {
    (void)frame_from_module_map([n](const SampledLoop& x) { return 0.5 * (x + rotate(x, 1.0 / n)); }, 2, n);
  });
  const double singular = expect_error(ErrorKind::SingularFrame, [&] {
    (void)frame_from_module_map(
        [](const SampledLoop& x) {
          Eigen::MatrixXd s = x.samples();
          s.row(1).setZero();
          return SampledLoop(s);
        },
        2, n);
  });
  r.add("reconstruction", "a module map of loops is a loop of matrices", recon, kFrameTol);
  r.add("probe-reproduction", "the recovered frame reproduces the module map", probe, kFrameTol);
  r.add("rotation-example", "pointwise rotation is recovered as its rotation loop", rot_res, kRotationFrameTol);
  r.add("convolution-rejected", "operators that are not pointwise linear are rejected", conv, 0.0);
  r.add("singular-rejected", "singular frames are rejected", singular, 0.0);
}

void exp_nonsurjective(Context& c, Report& r) {
  c.require({ManifoldKind::Sphere});
  const EmbeddedManifold& m = c.manifold;
  const int n = c.n();
  const double offset = 0.5 / n;
  const Eigen::Vector3d south(0, 0, -1);
  double min_jump = exp_nonsurjectivity_witness(m, south, great_circle(south, Eigen::Vector3d(1, 0, 0), n, offset)).jump_magnitude;
  for (int i = 0; i < c.trials(10); ++i) {
    const double phi = c.rng.uniform(0.0, kTwoPi);
    const Eigen::Vector3d b(std::cos(phi), std::sin(phi), 0.0);
    min_jump = std::min(min_jump, exp_nonsurjectivity_witness(m, south, great_circle(south, b, n, offset)).jump_magnitude);
  }
  MaxResidual smooth;
  std::vector<double> distances = {0.2, 0.5, 1.0};
  for (int i = 0; i < c.trials(10); ++i) distances.push_back(c.rng.uniform(0.2, kPi / 2));
  for (double d : distances) {
    const double phi = c.rng.uniform(0.0, kTwoPi);
    const Eigen::Vector3d a(std::sin(d) * std::cos(phi), std::sin(d) * std::sin(phi), -std::cos(d));
    const Eigen::Vector3d b = south.cross(a).normalized();
    smooth.update(exp_nonsurjectivity_witness(m, south, great_circle(a, b, n, offset)).jump_magnitude);
  }
  const Point p = tubular_projection(m, Eigen::Vector3d(c.rng.normal(), c.rng.normal(), std::abs(c.rng.normal()) + 0.2));
  const double constant = exp_nonsurjectivity_witness(m, south, constant_loop(p, n)).jump_magnitude;
  r.add("through-pole-inverse-jump", "no geodesic joins the constant south-pole loop to great circles through it",
        1.0 / min_jump, 1.0 / kJumpFloor);
  r.add("away-from-pole-jump", "circles away from the pole admit a continuous logarithm lift", smooth,
        kSmoothCeiling);
  r.add("constant-target", "a constant target has a constant lift", constant, 0.0);
}

}  // namespace loopspace::lab::detail
