#include <cmath>
#include <numbers>

#include "loopspace/loop.hpp"
#include "loopspace/tubes.hpp"
#include "suite_util.hpp"

namespace loopspace::lab::detail {

namespace {

constexpr double kRoundtripTol = 1e-6;
constexpr double kBasepointTol = 1e-8;
constexpr double kPartitionTol = 1e-10;
constexpr double kEvaluationTol = 1e-7;
constexpr double kRotationTol = 1e-7;
constexpr double kCosetMeanTol = 1e-8;
constexpr double kModeZeroTol = 1e-12;

// A point whose chart coordinates are far outside the unit ball.
Point far_from(const EmbeddedManifold& m, const Point& x) {
  switch (m.kind()) {
    case ManifoldKind::Flat: {
      Point y = x;
      y(0) += 3.0;
      return y;
    }
    case ManifoldKind::Sphere:
    case ManifoldKind::Torus:
      break;
  }
  return m.nearest_point(-x + 1e-3 * Point::Ones(x.size()));
}

SampledLoop based_at(const SampledLoop& gamma, const Point& x) {
  Eigen::MatrixXd s = gamma.samples();
  s.col(0) = x;
  return SampledLoop(s);
}

SampledLoop near_loop(Context& c, int n) {
  const EmbeddedManifold& m = c.manifold;
  return c.rng.loop_near(m, c.rng.random_point(m), n, 0.25);
}

}  // namespace

void fibration(Context& c, Report& r) {
  const EmbeddedManifold& m = c.manifold;
  const int n = c.n(), steps = c.cfg.flow_steps;
  MaxResidual basepoint, roundtrip, flow_inverse, start, partition, pou_eval, pou_linear;
  for (int i = 0; i < c.trials(20); ++i) {
    // The chart is centred near the start of the loop so that the start lies in its patch.
    const SampledLoop gamma = c.rng.random_loop(m, n);
    const Point x = m.nearest_point(gamma.node(0) + c.rng.random_tangent(m, gamma.node(0), c.rng.uniform(0.0, 0.5)));
    const CenteredChart chart(m, x);
    const double res = attempt([&] {
      const BasedLoop b = based_trivialize(chart, gamma, steps);
      basepoint.update((b.omega.node(0) - x).norm());
      start.update((b.start - gamma.node(0)).norm());
      return sup_distance(based_untrivialize(chart, b, steps), gamma);
    });
    if (std::isnan(res)) basepoint.fail();
    roundtrip.update(res);

    Eigen::VectorXd v = c.rng.normal_vector(m.intrinsic_dim()), u = c.rng.normal_vector(m.intrinsic_dim());
    v *= c.rng.uniform(0.0, 2.0) / v.norm();
    u *= c.rng.uniform(0.0, 2.0) / u.norm();
    const FlowDiffeo psi(v, steps);
    flow_inverse.update((psi.inverse()(psi(u)) - u).norm());

    const auto part = SquaredPartition::standard(m);
    const Point y = c.rng.random_point(m);
    double sum = 0.0;
    for (int l = 0; l < part.patches(); ++l) sum += part.weight(l, y) * part.weight(l, y);
    partition.update(std::abs(sum - 1.0));
    const Eigen::VectorXd w1 = c.rng.random_tangent(m, x, 1.0), w2 = c.rng.random_tangent(m, x, 1.0);
    pou_eval.update((pou_section(part, {x, w1})(x) - w1).norm());
    const double a = c.rng.normal();
    pou_linear.update((pou_section(part, {x, a * w1 + w2})(y) - a * pou_section(part, {x, w1})(y) -
                       pou_section(part, {x, w2})(y)).norm());
  }
  const double outside = [&] {
    const Point x = c.rng.random_point(m);
    const CenteredChart chart(m, x);
    const SampledLoop far = constant_loop(far_from(m, x), n);
    return expect_error(ErrorKind::OutsidePatch, [&] { (void)based_trivialize(chart, far, steps); });
  }();
  r.add("basepoint", "the trivialised loop is based at the chart centre", basepoint, kBasepointTol);
  r.add("start-point", "the trivialisation records the start point exactly", start, 0.0);
  r.add("trivialization-roundtrip", "the based trivialisation is inverted by the untrivialisation", roundtrip,
        kRoundtripTol);
  r.add("flow-inverse", "the reversed flow inverts the compactly supported flow", flow_inverse, c.oracle_tol());
  r.add("partition-of-squares", "the squared partition weights sum to one", partition, kPartitionTol);
  r.add("pou-section-evaluation", "the spread section restricts to the given vector", pou_eval, kPartitionTol);
  r.add("pou-section-linearity", "the spread section is linear in the vector", pou_linear, kPartitionTol);
  r.add("outside-patch", "loops starting outside the patch are rejected", outside, 0.0);
}

void tube_lp(Context& c, Report& r) {
  const EmbeddedManifold& m = c.manifold;
  const int n = c.n(), steps = c.cfg.flow_steps, k = m.ambient_dim();
  const auto tube = TubeGeometry::diagonal(m);
  MaxResidual evaluation, roundtrip, recovery, zero;
  for (int i = 0; i < c.trials(20); ++i) {
    const SampledLoop a = c.rng.random_loop(m, n, 0.3);
    const Point q0 = a.node(0);
    Eigen::MatrixXd pair(2 * k, n);
    pair.topRows(k) = a.samples();
    pair.bottomRows(k) = based_at(c.rng.loop_near(m, q0, n, 0.2), q0).samples();
    const SampledLoop alpha(pair);
    const Eigen::VectorXd v = c.rng.random_tangent(m, q0, c.rng.uniform(0.0, 0.9));
    roundtrip.update(attempt([&] {
      const SampledLoop z = tube_LP(tube, alpha, v, steps);
      evaluation.update((z.node(0) - tube.nu(q0, v)).norm());
      const TubeCoords back = tube_LP_inverse(tube, z, steps);
      recovery.update(std::max((back.vector - v).norm(), (back.base - q0).norm()));
      return sup_distance(back.alpha, alpha);
    }));
    zero.update(attempt([&] { return sup_distance(tube_LP(tube, alpha, Eigen::VectorXd::Zero(k), steps), alpha); }));
  }
  MaxResidual point_tube;
  {
    const Point x0 = c.rng.random_point(m);
    const auto pt = TubeGeometry::point(m, x0);
    const CenteredChart chart(m, x0);
    const SampledLoop omega = based_at(c.rng.loop_near(m, x0, n, 0.3), x0);
    Eigen::VectorXd v = c.rng.normal_vector(m.intrinsic_dim());
    v *= 0.4 / v.norm();
    point_tube.update(attempt([&] {
      return sup_distance(tube_LP(pt, omega, v, steps), based_untrivialize(chart, {omega, chart.from_coords(v)}, steps));
    }));
  }
  const double outside = [&] {
    const SampledLoop a = constant_loop(c.rng.random_point(m), n);
    Eigen::MatrixXd pair(2 * k, n);
    pair.topRows(k) = a.samples();
    pair.bottomRows(k) = a.samples();
    const Eigen::VectorXd v = c.rng.random_tangent(m, a.node(0), 1.5);
    return expect_error(ErrorKind::OutsideTube, [&] { (void)tube_LP(tube, SampledLoop(pair), v, steps); });
  }();
  r.add("nu-evaluation", "evaluation at the basepoint recovers the normal tube map", evaluation, kEvaluationTol);
  r.add("tube-roundtrip", "the coincidence tube is inverted loop by loop", roundtrip, kRoundtripTol);
  r.add("normal-vector-recovery", "the inverse recovers the normal vector and base point", recovery,
        c.oracle_tol());
  r.add("zero-vector", "the zero normal vector leaves loops fixed", zero, 0.0);
  r.add("point-tube", "the tube of a point is the based fibration", point_tube, c.oracle_tol());
  r.add("outside-tube", "normal vectors beyond the tube radius are rejected", outside, 0.0);
}

void equivariant(Context& c, Report& r) {
  const EmbeddedManifold& m = c.manifold;
  const int n = c.n();
  const CircleSubgroup G{c.cfg.group_order};
  const std::vector<int> offsets = G.coset_offsets(n);
  const int period = G.is_full() ? 1 : n / G.order;
  MaxResidual roundtrip, mean, rotation, periodic, tube_roundtrip;
  for (int i = 0; i < c.trials(10); ++i) {
    const SampledLoop g = near_loop(c, n);
    roundtrip.update(attempt([&] {
      const EquivariantSplit split = equivariant_decompose(m, G, g);
      for (int j = 0; j < period; ++j) {
        Eigen::VectorXd acc = Eigen::VectorXd::Zero(m.ambient_dim());
        for (int o : offsets) acc += split.normal.vectors().node(j + o);
        mean.update(acc.norm() / static_cast<double>(offsets.size()));
      }
      const double s = static_cast<double>(c.rng.integer(1, n - 1)) / n;
      const EquivariantSplit rs = equivariant_decompose(m, G, rotate(g, s));
      rotation.update(std::max(sup_distance(rs.fixed, rotate(split.fixed, s)),
                               sup_distance(rs.normal.vectors(), rotate(split.normal.vectors(), s))));
      const double shift = G.is_full() ? static_cast<double>(c.rng.integer(1, n - 1)) / n : 1.0 / G.order;
      periodic.update(sup_distance(rotate(split.fixed, shift), split.fixed));
      const SampledLoop raw = decompress_normal(G, split.normal.vectors(), 2.0);
      const TangentSection normal(m, split.fixed, raw);
      const EquivariantSplit back = equivariant_tube_inverse(m, G, equivariant_tube(m, G, normal));
      tube_roundtrip.update(std::max(sup_distance(back.fixed, split.fixed), sup_distance(back.normal.vectors(), raw)));
      return sup_distance(equivariant_recompose(m, split), g);
    }));
  }
  if (std::isnan(roundtrip.value())) {
    mean.fail();
    rotation.fail();
    periodic.fail();
    tube_roundtrip.fail();
  }
  MaxResidual mode_zero;
  {
    // The S^1 average on R^3 is the Fourier mode-0 part of the loop.
    const auto f = EmbeddedManifold::flat(3);
    for (int i = 0; i < c.trials(10); ++i) {
      const SampledLoop g = c.rng.random_loop(f, n);
      mode_zero.update(attempt([&] {
        const EquivariantSplit split = equivariant_decompose(f, CircleSubgroup::full(), g);
        const Eigen::VectorXd avg = g.samples().rowwise().mean();
        const SampledLoop expect_fixed = constant_loop(avg, n);
        return std::max(sup_distance(split.fixed, expect_fixed),
                        sup_distance(split.normal.vectors(), g - expect_fixed));
      }));
    }
  }
  r.add("decompose-recompose", "equivariant decomposition is inverted by recomposition", roundtrip, kRoundtripTol);
  r.add("coset-mean-zero", "normal data has zero mean over every coset", mean, kCosetMeanTol);
  r.add("rotation-commutation", "decomposition commutes with the circle action", rotation, kRotationTol);
  r.add("fixed-part-invariant", "the fixed part is invariant under the subgroup", periodic, c.oracle_tol());
  r.add("tube-roundtrip", "the equivariant tube is inverted by its inverse", tube_roundtrip, kRoundtripTol);
  r.add("flat-mode-zero", "the circle average on flat space is the mode-0 split", mode_zero, kModeZeroTol);
  if (m.kind() == ManifoldKind::Sphere) {
    // Antipodal pairs have no local average on the sphere.
    const double rejected = expect_error(ErrorKind::OutsideAveragingDomain, [&] {
      const SampledLoop equator = SampledLoop::from_function(3, n, [](double t) {
        return Eigen::VectorXd(Eigen::Vector3d(std::cos(2.0 * std::numbers::pi * t), std::sin(2.0 * std::numbers::pi * t), 0.0));
      });
      (void)equivariant_decompose(m, CircleSubgroup::cyclic(2), equator);
    });
    r.add("outside-averaging-domain", "cosets without a local average are rejected", rejected, 0.0);
  }
}

}  // namespace loopspace::lab::detail
