#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "loopspace/error.hpp"
#include "loopspace/polarization.hpp"
#include "loopspace/tubes.hpp"
#include "support.hpp"

using namespace loopspace;
using testing_support::kTwoPi;
using testing_support::Rand;
using testing_support::random_loop;
using testing_support::TrigPoly;

namespace {

ErrorKind kind_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.kind();
  }
  ADD_FAILURE() << "no error thrown";
  return ErrorKind::InvalidArgument;
}

Eigen::Vector3d random_tangent(Rand& r, const Eigen::Vector3d& p, double len) {
  Eigen::Vector3d w = r.normal_vector(3);
  w -= w.dot(p) * p;
  return len * w.normalized();
}

SampledLoop loop_near(const EmbeddedManifold& m, const Point& x, Rand& r, int n, double size) {
  if (m.kind() == ManifoldKind::Torus) {
    const TrigPoly p = TrigPoly::random(r, 2, 3, size);
    const double a0 = std::atan2(x(1), x(0)), b0 = std::atan2(x(3), x(2));
    return SampledLoop::from_function(4, n, [&](double t) {
      const Eigen::VectorXd d = p(t);
      const double a = a0 + d(0), b = b0 + d(1);
      return Eigen::VectorXd(Eigen::Vector4d(std::cos(a), std::sin(a), std::cos(b), std::sin(b)));
    });
  }
  const TrigPoly p = TrigPoly::random(r, m.ambient_dim(), 3, size);
  return SampledLoop::from_function(m.ambient_dim(), n, [&](double t) { return tubular_projection(m, x + p(t)); });
}

}  // namespace

TEST(Bump, Profile) {
  const BumpProfile rho;
  EXPECT_EQ(rho(-5.0), 1.0);
  EXPECT_EQ(rho(1.0), 1.0);
  EXPECT_EQ(rho(2.0), 0.0);
  EXPECT_EQ(rho(7.0), 0.0);
  EXPECT_NEAR(rho(1.5), 0.5, 1e-15);
  double prev = 1.0;
  for (int i = 1; i < 100; ++i) {
    const double v = rho(1.0 + i / 100.0);
    EXPECT_LE(v, prev);
    EXPECT_GE(v, 0.0);
    prev = v;
  }
}

TEST(Flow, Examples) {
  const Eigen::Vector2d v(0.3, 0.4);
  EXPECT_LT((flow_point(FlowDiffeo(v), Eigen::Vector2d::Zero()) - v).norm(), 1e-10);
  Rand r(1);
  for (int i = 0; i < 5; ++i) {
    const Eigen::VectorXd u = r.normal_vector(2);
    EXPECT_EQ(flow_point(FlowDiffeo(Eigen::Vector2d::Zero()), u), u);
  }
  // |u|^2 >= 2 and the drive too small to reach the support.
  const Eigen::Vector2d far(1.5, 0.2);
  EXPECT_EQ(flow_point(FlowDiffeo(Eigen::Vector2d(0.01, 0.0)), far), Point(far));
}

TEST(Flow, InverseRoundTrip) {
  Rand r(2);
  for (int i = 0; i < 100; ++i) {
    const Eigen::VectorXd v = r.normal_vector(3).normalized() * r.uniform(0.0, 2.0);
    const Eigen::VectorXd u = r.normal_vector(3).normalized() * r.uniform(0.0, 2.0);
    const FlowDiffeo f(v);
    EXPECT_LT((flow_point(f.inverse(), flow_point(f, u)) - u).norm(), 1e-7);
  }
}

TEST(Flow, LargeDriveNeedsMoreSteps) {
  Rand r(21);
  for (int i = 0; i < 20; ++i) {
    const Eigen::VectorXd v = r.normal_vector(3).normalized() * 4.0;
    const Eigen::VectorXd u = r.normal_vector(3).normalized() * r.uniform(0.0, 2.0);
    const FlowDiffeo f(v, 400);
    EXPECT_LT((flow_point(f.inverse(), flow_point(f, u)) - u).norm(), 1e-7);
  }
}

TEST(CenteredChart, RoundTripAndJacobian) {
  Rand r(3);
  for (const auto& m : {EmbeddedManifold::sphere2(), EmbeddedManifold::torus2(), EmbeddedManifold::flat(2)}) {
    Point x = Point::Zero(m.ambient_dim());
    if (m.kind() == ManifoldKind::Sphere) x = r.unit3();
    if (m.kind() == ManifoldKind::Torus) x << std::cos(1.0), std::sin(1.0), std::cos(-2.0), std::sin(-2.0);
    const CenteredChart c(m, x);
    EXPECT_LT((c.from_coords(Eigen::VectorXd::Zero(2)) - x).norm(), 1e-15);
    for (int i = 0; i < 20; ++i) {
      const Eigen::VectorXd w = r.normal_vector(2);
      const Point y = c.from_coords(w);
      EXPECT_LT(m.constraint_residual(y), 1e-12);
      const auto back = c.to_coords(y);
      ASSERT_TRUE(back.has_value());
      EXPECT_LT((*back - w).norm(), 1e-12 * std::max(1.0, w.squaredNorm()));
      const double h = 1e-6;
      Eigen::MatrixXd fd(m.ambient_dim(), 2);
      for (int k = 0; k < 2; ++k) {
        const Eigen::VectorXd e = Eigen::VectorXd::Unit(2, k);
        fd.col(k) = (c.from_coords(w + h * e) - c.from_coords(w - h * e)) / (2 * h);
      }
      EXPECT_LT((fd - c.jacobian(w)).norm(), 1e-8);
    }
  }
  const CenteredChart north(EmbeddedManifold::sphere2(), Eigen::Vector3d(0, 0, 1));
  EXPECT_FALSE(north.to_coords(Eigen::Vector3d(0, 0, -1)).has_value());
}

TEST(BasedTrivialize, AlreadyBased) {
  Rand r(4);
  const auto s = EmbeddedManifold::sphere2();
  const Eigen::Vector3d x(0, 0, 1);
  const CenteredChart c(s, x);
  Eigen::MatrixXd g = loop_near(s, x, r, 32, 0.3).samples();
  g.col(0) = x;
  const SampledLoop gamma(g);
  const BasedLoop b = based_trivialize(c, gamma);
  EXPECT_EQ(b.omega, gamma);
  EXPECT_EQ(b.start, Point(x));
}

TEST(BasedTrivialize, RoundTripAndBasepoint) {
  Rand r(5);
  for (const auto& m : {EmbeddedManifold::sphere2(), EmbeddedManifold::torus2(), EmbeddedManifold::flat(2)}) {
    Point x = Point::Zero(m.ambient_dim());
    if (m.kind() == ManifoldKind::Sphere) x = Eigen::Vector3d(0, 0.6, 0.8);
    if (m.kind() == ManifoldKind::Torus) x << 1, 0, 0, 1;
    const CenteredChart c(m, x);
    for (int i = 0; i < 30; ++i) {
      const SampledLoop gamma = loop_near(m, x, r, 64, 0.25);
      const BasedLoop b = based_trivialize(c, gamma);
      EXPECT_LT((b.omega.node(0) - x).norm(), 1e-8);
      EXPECT_EQ(b.start, gamma.node(0));
      const SampledLoop back = based_untrivialize(c, b);
      EXPECT_LT(sup_distance(back, gamma), 1e-7);
      EXPECT_LT((back.node(0) - gamma.node(0)).norm(), 1e-8);
      for (int j = 0; j < 64; ++j) EXPECT_LT(m.constraint_residual(b.omega.node(j)), 1e-10);
    }
  }
}

TEST(BasedTrivialize, FlatIsPointwiseInverseFlow) {
  const auto f = EmbeddedManifold::flat(2);
  const CenteredChart c(f, Eigen::Vector2d::Zero());
  const SampledLoop gamma = SampledLoop::from_function(2, 32, [](double t) {
    return Eigen::Vector2d(0.3 + 0.2 * std::cos(kTwoPi * t), 0.1 * std::sin(kTwoPi * t));
  });
  const BasedLoop b = based_trivialize(c, gamma);
  const FlowDiffeo back(-gamma.node(0));
  for (int j = 0; j < 32; ++j) EXPECT_LT((b.omega.node(j) - flow_point(back, gamma.node(j))).norm(), 1e-14);
  EXPECT_LT(sup_distance(based_untrivialize(c, b), gamma), 1e-8);
}

TEST(BasedTrivialize, OutsidePatch) {
  const auto s = EmbeddedManifold::sphere2();
  const CenteredChart c(s, Eigen::Vector3d(0, 0, 1));
  const SampledLoop far = SampledLoop::constant(Eigen::Vector3d(1, 0, 0), 16);
  EXPECT_EQ(kind_of([&] { (void)based_trivialize(c, far); }), ErrorKind::OutsidePatch);
}

TEST(SquaredPartition, SquaresSumToOne) {
  Rand r(6);
  const auto s = EmbeddedManifold::sphere2();
  const auto part = SquaredPartition::standard(s);
  EXPECT_EQ(part.patches(), 2);
  for (int i = 0; i < 100; ++i) {
    const Eigen::Vector3d x = r.unit3();
    double sum = 0.0;
    for (int l = 0; l < part.patches(); ++l) sum += part.weight(l, x) * part.weight(l, x);
    EXPECT_NEAR(sum, 1.0, 1e-10);
  }
  EXPECT_EQ(SquaredPartition::standard(EmbeddedManifold::torus2()).patches(), 1);
}

TEST(PouSection, EvaluationLinearityZero) {
  Rand r(7);
  for (const auto& m : {EmbeddedManifold::sphere2(), EmbeddedManifold::torus2(), EmbeddedManifold::flat(3)}) {
    const auto part = SquaredPartition::standard(m);
    for (int i = 0; i < 20; ++i) {
      Point p;
      if (m.kind() == ManifoldKind::Sphere) p = r.unit3();
      else if (m.kind() == ManifoldKind::Torus) {
        const double a = r.uniform(0, kTwoPi), b = r.uniform(0, kTwoPi);
        p = Eigen::Vector4d(std::cos(a), std::sin(a), std::cos(b), std::sin(b));
      } else p = r.normal_vector(3);
      const Eigen::VectorXd v = m.tangent_projector(p) * r.normal_vector(m.ambient_dim());
      const Eigen::VectorXd w = m.tangent_projector(p) * r.normal_vector(m.ambient_dim());
      EXPECT_LT((pou_section(part, {p, v})(p) - v).norm(), 1e-10);
      const Point x = tubular_projection(m, p + 0.5 * r.normal_vector(m.ambient_dim()));
      const Eigen::VectorXd lhs = pou_section(part, {p, 2.0 * v - 3.0 * w})(x);
      const Eigen::VectorXd rhs = 2.0 * pou_section(part, {p, v})(x) - 3.0 * pou_section(part, {p, w})(x);
      EXPECT_LT((lhs - rhs).norm(), 1e-10);
      EXPECT_LT(pou_section(part, {p, Eigen::VectorXd::Zero(m.ambient_dim())})(x).norm(), 1e-15);
      EXPECT_LT((m.tangent_projector(x) * lhs - lhs).norm(), 1e-10);
    }
  }
}

TEST(TubeLP, ZeroVectorLeavesLoop) {
  Rand r(8);
  const auto s = EmbeddedManifold::sphere2();
  const auto tube = TubeGeometry::diagonal(s);
  const SampledLoop a = random_loop(s, r, 32, 0.3);
  Eigen::MatrixXd pair(6, 32);
  pair.topRows(3) = a.samples();
  pair.bottomRows(3) = loop_near(s, a.node(0), r, 32, 0.1).samples();
  pair.col(0).tail(3) = a.node(0);
  const SampledLoop alpha(pair);
  EXPECT_EQ(tube_LP(tube, alpha, Eigen::Vector3d::Zero()), alpha);
}

TEST(TubeLP, PointTubeReproducesBasedTrivialize) {
  Rand r(9);
  const auto s = EmbeddedManifold::sphere2();
  const Eigen::Vector3d x0(0, 0, 1);
  const auto tube = TubeGeometry::point(s, x0);
  const CenteredChart chart(s, x0);
  Eigen::MatrixXd g = loop_near(s, x0, r, 32, 0.3).samples();
  g.col(0) = x0;
  const SampledLoop omega(g);
  const Eigen::Vector2d v(0.3, -0.2);
  const SampledLoop z = tube_LP(tube, omega, v);
  const SampledLoop expect = based_untrivialize(chart, {omega, chart.from_coords(v)});
  EXPECT_LT(sup_distance(z, expect), 1e-12);
  EXPECT_LT((z.node(0) - tube.nu(x0, v)).norm(), 1e-7);
  const TubeCoords back = tube_LP_inverse(tube, z);
  EXPECT_LT(sup_distance(back.alpha, omega), 1e-6);
  EXPECT_LT((back.vector - Eigen::VectorXd(v)).norm(), 1e-12);
}

TEST(TubeLP, DiagonalRoundTripAndEvaluation) {
  Rand r(10);
  for (const auto& m : {EmbeddedManifold::sphere2(), EmbeddedManifold::torus2(), EmbeddedManifold::flat(2)}) {
    const auto tube = TubeGeometry::diagonal(m);
    const int k = m.ambient_dim();
    for (int i = 0; i < 30; ++i) {
      const SampledLoop a = random_loop(m, r, 32, 0.3);
      Eigen::MatrixXd pair(2 * k, 32);
      pair.topRows(k) = a.samples();
      pair.bottomRows(k) = loop_near(m, a.node(0), r, 32, 0.2).samples();
      pair.col(0).tail(k) = a.node(0);
      const SampledLoop alpha(pair);
      const Point q0 = a.node(0);
      Eigen::VectorXd v = m.tangent_projector(q0) * r.normal_vector(k);
      v *= r.uniform(0.0, 0.9) / v.norm();
      const SampledLoop z = tube_LP(tube, alpha, v);
      EXPECT_LT((z.node(0) - tube.nu(q0, v)).norm(), 1e-7);
      const auto nc = tube.nu_inverse(z.node(0));
      ASSERT_TRUE(nc.has_value());
      EXPECT_LT(m.distance(z.node(0).head(k), z.node(0).tail(k)), std::numbers::pi);
      const TubeCoords back = tube_LP_inverse(tube, z);
      EXPECT_LT(sup_distance(back.alpha, alpha), 1e-6);
      EXPECT_LT((back.vector - v).norm(), 1e-9);
      EXPECT_LT((back.base - q0).norm(), 1e-9);
    }
  }
}

TEST(TubeLP, Errors) {
  const auto s = EmbeddedManifold::sphere2();
  const auto tube = TubeGeometry::diagonal(s);
  Eigen::MatrixXd pair(6, 16);
  for (int j = 0; j < 16; ++j) pair.col(j) << 0, 0, 1, 0, 0, 1;
  EXPECT_EQ(kind_of([&] { (void)tube_LP(tube, SampledLoop(pair), Eigen::Vector3d(1.5, 0, 0)); }), ErrorKind::OutsideTube);
  Eigen::MatrixXd off = pair;
  off.col(0) << 0, 0, 1, 1, 0, 0;
  EXPECT_THROW((void)tube_LP(tube, SampledLoop(off), Eigen::Vector3d(0.1, 0, 0)), Error);
  Eigen::MatrixXd far = pair;
  far.col(0) << 0, 0, 1, 0, 0, -1;
  EXPECT_EQ(kind_of([&] { (void)tube_LP_inverse(tube, SampledLoop(far)); }), ErrorKind::OutsideTube);
}

TEST(LocalAverage, Examples) {
  const auto s = EmbeddedManifold::sphere2();
  const Eigen::Vector3d p = Eigen::Vector3d(1, 2, 2) / 3.0;
  EXPECT_LT((local_average(s, {CircleSubgroup::cyclic(3), {p, p, p}}) - p).norm(), 1e-15);
  const double a = 0.6, c = 0.8;
  const Point avg = local_average(s, {CircleSubgroup::cyclic(2), {Eigen::Vector3d(a, 0, c), Eigen::Vector3d(-a, 0, c)}});
  EXPECT_LT((avg - Eigen::Vector3d(0, 0, 1)).norm(), 1e-15);
  EXPECT_EQ(kind_of([&] {
              (void)local_average(s, {CircleSubgroup::cyclic(2), {Eigen::Vector3d(1, 0, 0), Eigen::Vector3d(-1, 0, 0)}});
            }),
            ErrorKind::OutsideTube);
}

TEST(LocalAverage, ShiftInvariance) {
  Rand r(11);
  const auto s = EmbeddedManifold::sphere2();
  std::vector<Point> v;
  for (int i = 0; i < 4; ++i) v.push_back(tubular_projection(s, Eigen::Vector3d(0, 0, 1) + 0.4 * r.normal_vector(3)));
  const Point a = local_average(s, {CircleSubgroup::cyclic(4), v});
  std::rotate(v.begin(), v.begin() + 1, v.end());
  EXPECT_LT((local_average(s, {CircleSubgroup::cyclic(4), v}) - a).norm(), 1e-15);
}

TEST(Equivariant, CosetOffsets) {
  EXPECT_EQ(CircleSubgroup::cyclic(4).coset_offsets(16), (std::vector<int>{0, 4, 8, 12}));
  EXPECT_EQ(CircleSubgroup::full().coset_offsets(8).size(), 8u);
  EXPECT_THROW((void)CircleSubgroup::cyclic(3).coset_offsets(16), Error);
}

TEST(Equivariant, PeriodicLoopDecomposesTrivially) {
  Rand r(12);
  const auto s = EmbeddedManifold::sphere2();
  const TrigPoly p = TrigPoly::random(r, 3, 2, 0.3);
  const SampledLoop g = SampledLoop::from_function(3, 64, [&](double t) {
    return Eigen::VectorXd((Eigen::Vector3d(0, 0, 1) + p(4.0 * t)).normalized());
  });
  const EquivariantSplit split = equivariant_decompose(s, CircleSubgroup::cyclic(4), g);
  EXPECT_LT(sup_distance(split.fixed, g), 1e-14);
  EXPECT_LT(sup_norm(split.normal.vectors()), 1e-14);
}

TEST(Equivariant, FlatCircleAverageIsModeZero) {
  Rand r(13);
  const auto f = EmbeddedManifold::flat(3);
  const Eigen::Vector3d p(1, -2, 0.5);
  const SampledLoop pert = TrigPoly::random(r, 3, 5, 0.3).sample(64) - SampledLoop::constant(Eigen::VectorXd::Zero(3), 64);
  Eigen::MatrixXd centred = pert.samples();
  const Eigen::Vector3d mean = centred.rowwise().mean();
  centred.colwise() -= mean;
  const SampledLoop g = SampledLoop::constant(p, 64) + SampledLoop(centred);
  const EquivariantSplit split = equivariant_decompose(f, CircleSubgroup::full(), g);
  EXPECT_LT(sup_distance(split.fixed, SampledLoop::constant(p, 64)), 1e-14);
  EXPECT_LT(sup_distance(split.normal.vectors(), SampledLoop(centred)), 1e-14);

  // Against the Fourier split into mode 0 and the rest.
  const SampledLoop h = TrigPoly::random(r, 3, 6, 1.0).sample(64);
  FourierRep rep = to_fourier(h);
  FourierRep zero_mode = rep;
  zero_mode.coeffs.setZero();
  zero_mode.coeffs.col(0) = rep.coeffs.col(0);
  const SampledLoop mode0 = to_samples(zero_mode);
  const EquivariantSplit hs = equivariant_decompose(f, CircleSubgroup::full(), h);
  EXPECT_LT(sup_distance(hs.fixed, mode0), 1e-12);
  EXPECT_LT(sup_distance(hs.normal.vectors(), h - mode0), 1e-12);
}

TEST(Equivariant, FlatTwoCosetMeansVanish) {
  Rand r(14);
  const auto f = EmbeddedManifold::flat(2);
  const SampledLoop g = TrigPoly::random(r, 2, 6, 1.0).sample(64);
  const EquivariantSplit split = equivariant_decompose(f, CircleSubgroup::cyclic(2), g);
  for (int j = 0; j < 32; ++j) {
    EXPECT_LT((split.normal.vectors().node(j) + split.normal.vectors().node(j + 32)).norm(), 1e-10);
    EXPECT_LT((split.fixed.node(j) - 0.5 * (g.node(j) + g.node(j + 32))).norm(), 1e-14);
  }
}

TEST(Equivariant, RoundTripCosetMeanAndRotation) {
  Rand r(15);
  for (const auto& m : {EmbeddedManifold::sphere2(), EmbeddedManifold::torus2(), EmbeddedManifold::flat(2)}) {
    for (CircleSubgroup G : {CircleSubgroup::cyclic(1), CircleSubgroup::cyclic(2), CircleSubgroup::cyclic(4), CircleSubgroup::full()}) {
      for (int i = 0; i < 10; ++i) {
        const SampledLoop g = m.kind() == ManifoldKind::Flat ? random_loop(m, r, 64)
                                                               : loop_near(m, random_loop(m, r, 8).node(0), r, 64, 0.25);
        const EquivariantSplit split = equivariant_decompose(m, G, g);
        EXPECT_LT(sup_distance(equivariant_recompose(m, split), g), 1e-6);
        const std::vector<int> offsets = G.coset_offsets(64);
        const int period = G.is_full() ? 1 : 64 / G.order;
        for (int j = 0; j < period; ++j) {
          Eigen::VectorXd mean = Eigen::VectorXd::Zero(m.ambient_dim());
          for (int o : offsets) mean += split.normal.vectors().node(j + o);
          EXPECT_LT(mean.norm() / static_cast<double>(offsets.size()), 1e-8);
        }
        const int shift = G.is_full() ? 5 : 3;
        const double s = shift / 64.0;
        const EquivariantSplit rs = equivariant_decompose(m, G, rotate(g, s));
        EXPECT_LT(sup_distance(rs.fixed, rotate(split.fixed, s)), 1e-7);
        EXPECT_LT(sup_distance(rs.normal.vectors(), rotate(split.normal.vectors(), s)), 1e-7);
        EXPECT_LT(sup_distance(rotate(split.fixed, 1.0 / std::max(1, G.order)), split.fixed), 1e-15);
      }
    }
  }
}

TEST(Equivariant, OutsideAveragingDomain) {
  const auto s = EmbeddedManifold::sphere2();
  const SampledLoop c = SampledLoop::from_function(3, 32, [](double t) {
    return Eigen::Vector3d(std::cos(kTwoPi * t), std::sin(kTwoPi * t), 0.0);
  });
  EXPECT_EQ(kind_of([&] { (void)equivariant_decompose(s, CircleSubgroup::cyclic(2), c); }), ErrorKind::OutsideAveragingDomain);
}

TEST(Equivariant, TubeRoundTrip) {
  Rand r(16);
  const auto s = EmbeddedManifold::sphere2();
  const CircleSubgroup G = CircleSubgroup::cyclic(4);
  for (int i = 0; i < 20; ++i) {
    const SampledLoop g = loop_near(s, r.unit3(), r, 64, 0.25);
    const EquivariantSplit split = equivariant_decompose(s, G, g);
    const SampledLoop raw = decompress_normal(G, split.normal.vectors(), 2.0);
    const TangentSection normal(s, split.fixed, raw);
    const SampledLoop in_tube = equivariant_tube(s, G, normal);
    const EquivariantSplit back = equivariant_tube_inverse(s, G, in_tube);
    EXPECT_LT(sup_distance(back.fixed, split.fixed), 1e-9);
    EXPECT_LT(sup_distance(back.normal.vectors(), raw), 1e-6);
  }
  const SampledLoop n = SampledLoop::from_function(3, 16, [](double t) { return Eigen::Vector3d(std::cos(kTwoPi * t), 0, 0); });
  const SampledLoop c = compress_normal(CircleSubgroup::full(), n, 0.9);
  EXPECT_NEAR(sup_norm(c), 0.9 / std::sqrt(2.0), 1e-15);
  EXPECT_LT(sup_distance(decompress_normal(CircleSubgroup::full(), c, 0.9), n), 1e-14);
}
