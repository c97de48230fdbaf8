#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <vector>

#include "loopspace/error.hpp"
#include "loopspace/manifold.hpp"
#include "support.hpp"

using namespace loopspace;
using testing_support::Rand;

namespace {

constexpr double kPi = std::numbers::pi;

// Independent great-circle oracles, written out from spherical trigonometry.
Eigen::Vector3d sphere_exp(const Eigen::Vector3d& p, const Eigen::Vector3d& v) {
  const double a = v.norm();
  if (a == 0.0) return p;
  return std::cos(a) * p + std::sin(a) * v / a;
}

Eigen::Vector3d sphere_transport(const Eigen::Vector3d& p, const Eigen::Vector3d& v, const Eigen::Vector3d& w) {
  const double a = v.norm();
  if (a == 0.0) return w;
  const Eigen::Vector3d u = v / a;
  const double wu = w.dot(u);
  return w - wu * u + wu * (std::cos(a) * u - std::sin(a) * p);
}

Eigen::Vector3d random_tangent(Rand& r, const Eigen::Vector3d& p, double len) {
  Eigen::Vector3d w = r.normal_vector(3);
  w -= w.dot(p) * p;
  return len * w.normalized();
}

std::vector<Point> great_arc(const Eigen::Vector3d& p, const Eigen::Vector3d& v, int pieces) {
  std::vector<Point> path;
  for (int i = 0; i <= pieces; ++i) path.push_back(sphere_exp(p, (static_cast<double>(i) / pieces) * v));
  return path;
}

}  // namespace

TEST(Manifold, Tags) {
  EXPECT_EQ(EmbeddedManifold::from_tag("sphere2"), EmbeddedManifold::sphere2());
  EXPECT_EQ(EmbeddedManifold::from_tag("torus2"), EmbeddedManifold::torus2());
  EXPECT_EQ(EmbeddedManifold::from_tag("flat:3"), EmbeddedManifold::flat(3));
  EXPECT_EQ(EmbeddedManifold::flat(5).tag(), "flat:5");
  EXPECT_THROW(EmbeddedManifold::from_tag("klein"), Error);
  EXPECT_THROW(EmbeddedManifold::from_tag("flat:0"), Error);
  EXPECT_THROW(EmbeddedManifold::from_tag("flat:x"), Error);
}

TEST(Manifold, Dimensions) {
  EXPECT_EQ(EmbeddedManifold::sphere2().ambient_dim(), 3);
  EXPECT_EQ(EmbeddedManifold::sphere2().intrinsic_dim(), 2);
  EXPECT_EQ(EmbeddedManifold::torus2().ambient_dim(), 4);
  EXPECT_EQ(EmbeddedManifold::torus2().intrinsic_dim(), 2);
  EXPECT_EQ(EmbeddedManifold::flat(3).intrinsic_dim(), 3);
}

TEST(ProjectTangent, SphereExample) {
  const auto s = EmbeddedManifold::sphere2();
  const TangentAtPoint v = project_tangent(s, Eigen::Vector3d(0, 0, 1), Eigen::Vector3d(1, 2, 3));
  EXPECT_LT((v.vector - Eigen::Vector3d(1, 2, 0)).norm(), 1e-15);
}

TEST(ProjectTangent, NormalDirectionIsKilled) {
  const auto s = EmbeddedManifold::sphere2();
  const Eigen::Vector3d p = Eigen::Vector3d(1, 2, 2) / 3.0;
  EXPECT_LT(project_tangent(s, p, 4.0 * p).vector.norm(), 1e-15);
}

TEST(ProjectTangent, FlatIsIdentity) {
  const auto f = EmbeddedManifold::flat(3);
  const Eigen::Vector3d w(1, -2, 7);
  EXPECT_EQ(project_tangent(f, Eigen::Vector3d(5, 5, 5), w).vector, Eigen::VectorXd(w));
}

TEST(ProjectTangent, OffManifoldThrows) {
  const auto s = EmbeddedManifold::sphere2();
  try {
    (void)project_tangent(s, Eigen::Vector3d(0, 0, 1.1), Eigen::Vector3d(1, 0, 0));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::OffManifold);
  }
}

TEST(Projector, SymmetricIdempotentTraceN) {
  Rand r(1);
  for (const auto& m : {EmbeddedManifold::sphere2(), EmbeddedManifold::torus2(), EmbeddedManifold::flat(3)}) {
    for (int i = 0; i < 20; ++i) {
      Point p;
      if (m.kind() == ManifoldKind::Sphere) p = r.unit3();
      else if (m.kind() == ManifoldKind::Torus) {
        const double a = r.uniform(0, 2 * kPi), b = r.uniform(0, 2 * kPi);
        p = Eigen::Vector4d(std::cos(a), std::sin(a), std::cos(b), std::sin(b));
      } else p = r.normal_vector(3);
      const Eigen::MatrixXd P = m.tangent_projector(p);
      EXPECT_LT((P - P.transpose()).norm(), 1e-10);
      EXPECT_LT((P * P - P).norm(), 1e-10);
      EXPECT_NEAR(P.trace(), m.intrinsic_dim(), 1e-10);
      const Eigen::MatrixXd E = m.tangent_basis(p);
      EXPECT_LT((E.transpose() * E - Eigen::MatrixXd::Identity(m.intrinsic_dim(), m.intrinsic_dim())).norm(), 1e-12);
      EXPECT_LT((P * E - E).norm(), 1e-12);
    }
  }
}

TEST(ExpMap, SphereQuarterTurn) {
  const auto s = EmbeddedManifold::sphere2();
  const Point q = exp_map(s, {Eigen::Vector3d(0, 0, 1), Eigen::Vector3d(kPi / 2, 0, 0)}, 200);
  EXPECT_LT((q - Eigen::Vector3d(1, 0, 0)).norm(), 1e-8);
  EXPECT_LT(s.constraint_residual(q), 1e-10);
}

TEST(ExpMap, ZeroVector) {
  const auto s = EmbeddedManifold::sphere2();
  const Eigen::Vector3d p(0, 0.6, 0.8);
  EXPECT_EQ(exp_map(s, {p, Eigen::Vector3d::Zero()}), Point(p));
}

TEST(ExpMap, FlatIsExact) {
  const auto f = EmbeddedManifold::flat(3);
  const Eigen::Vector3d p(0.1, 0.2, 0.3), v(1.0, -3.0, 0.25);
  EXPECT_EQ(exp_map(f, {p, v}), Point(p + v));
}

TEST(ExpMap, MatchesOracleAndClosedForm) {
  Rand r(2);
  const auto s = EmbeddedManifold::sphere2();
  for (int i = 0; i < 50; ++i) {
    const Eigen::Vector3d p = r.unit3();
    const Eigen::Vector3d v = random_tangent(r, p, r.uniform(0.0, kPi - 0.1));
    const Point q = exp_map(s, {p, v}, 200);
    EXPECT_LT((q - sphere_exp(p, v)).norm(), 1e-7);
    EXPECT_LT((s.exp_closed(p, v) - sphere_exp(p, v)).norm(), 1e-14);
  }
}

TEST(ExpMap, TorusMatchesAngles) {
  Rand r(3);
  const auto t = EmbeddedManifold::torus2();
  for (int i = 0; i < 20; ++i) {
    const double a = r.uniform(0, 2 * kPi), b = r.uniform(0, 2 * kPi);
    const double da = r.uniform(-2, 2), db = r.uniform(-2, 2);
    const Eigen::Vector4d p(std::cos(a), std::sin(a), std::cos(b), std::sin(b));
    const Eigen::Vector4d v(-std::sin(a) * da, std::cos(a) * da, -std::sin(b) * db, std::cos(b) * db);
    const Eigen::Vector4d expect(std::cos(a + da), std::sin(a + da), std::cos(b + db), std::sin(b + db));
    EXPECT_LT((exp_map(t, {p, v}, 200) - expect).norm(), 1e-8);
    EXPECT_LT((t.exp_closed(p, v) - expect).norm(), 1e-14);
  }
}

TEST(ExpMap, ConstantSpeed) {
  Rand r(4);
  const auto s = EmbeddedManifold::sphere2();
  const Eigen::Vector3d p = r.unit3();
  const Eigen::Vector3d v = random_tangent(r, p, 2.5);
  for (const auto& st : geodesic_trajectory(s, {p, v}, 1.0, 200)) {
    EXPECT_NEAR(st.velocity.norm(), 2.5, 1e-7);
    EXPECT_LT(s.constraint_residual(st.position), 1e-10);
  }
}

TEST(LogMap, SphereExample) {
  const auto s = EmbeddedManifold::sphere2();
  const TangentAtPoint v = log_map(s, Eigen::Vector3d(0, 0, 1), Eigen::Vector3d(1, 0, 0));
  EXPECT_LT((v.vector - Eigen::Vector3d(kPi / 2, 0, 0)).norm(), 1e-14);
}

TEST(LogMap, SamePointAndFlat) {
  const auto s = EmbeddedManifold::sphere2();
  const Eigen::Vector3d p = Eigen::Vector3d(2, -1, 2) / 3.0;
  EXPECT_LT(log_map(s, p, p).vector.norm(), 1e-15);
  const auto f = EmbeddedManifold::flat(2);
  EXPECT_EQ(log_map(f, Eigen::Vector2d(1, 1), Eigen::Vector2d(3, -1)).vector, Point(Eigen::Vector2d(2, -2)));
}

TEST(LogMap, AntipodeThrows) {
  const auto s = EmbeddedManifold::sphere2();
  try {
    (void)log_map(s, Eigen::Vector3d(0, 0, 1), Eigen::Vector3d(0, 0, -1));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::OutOfInjectivityDomain);
  }
}

TEST(LogMap, InvertsExpBothRoutes) {
  Rand r(5);
  const auto s = EmbeddedManifold::sphere2();
  for (int i = 0; i < 20; ++i) {
    const Eigen::Vector3d p = r.unit3();
    const Eigen::Vector3d v = random_tangent(r, p, r.uniform(0.05, kPi - 0.1));
    const Point q = sphere_exp(p, v);
    EXPECT_LT((exp_map(s, log_map(s, p, q), 200) - q).norm(), 1e-7);
    const TangentAtPoint shot = log_map_shooting(s, p, q, 200);
    EXPECT_LT((exp_map(s, shot, 200) - q).norm(), 1e-7);
    EXPECT_LT((shot.vector - v).norm(), 1e-6);
  }
}

TEST(ParallelTransport, FlatUnchanged) {
  const auto f = EmbeddedManifold::flat(2);
  std::vector<Point> path{Eigen::Vector2d(0, 0), Eigen::Vector2d(1, 3), Eigen::Vector2d(-2, 1)};
  EXPECT_EQ(parallel_transport(f, path, Eigen::Vector2d(0.5, 2)), Point(Eigen::Vector2d(0.5, 2)));
}

TEST(ParallelTransport, QuarterCircleExamples) {
  const auto s = EmbeddedManifold::sphere2();
  const auto path = great_arc(Eigen::Vector3d(0, 0, 1), Eigen::Vector3d(kPi / 2, 0, 0), 200);
  EXPECT_LT((path.back() - Eigen::Vector3d(1, 0, 0)).norm(), 1e-15);
  EXPECT_LT((parallel_transport(s, path, Eigen::Vector3d(0, 1, 0)) - Eigen::Vector3d(0, 1, 0)).norm(), 1e-8);
  EXPECT_LT((parallel_transport(s, path, Eigen::Vector3d(1, 0, 0)) - Eigen::Vector3d(0, 0, -1)).norm(), 1e-8);
}

TEST(ParallelTransport, MatchesOracleAndIsIsometric) {
  Rand r(6);
  const auto s = EmbeddedManifold::sphere2();
  for (int i = 0; i < 30; ++i) {
    const Eigen::Vector3d p = r.unit3();
    const Eigen::Vector3d v = random_tangent(r, p, r.uniform(0.1, kPi - 0.1));
    const Eigen::Vector3d w1 = random_tangent(r, p, 1.3), w2 = random_tangent(r, p, 0.7);
    const auto path = great_arc(p, v, 200);
    const Point t1 = parallel_transport(s, path, w1), t2 = parallel_transport(s, path, w2);
    EXPECT_LT((t1 - sphere_transport(p, v, w1)).norm(), 1e-7);
    EXPECT_LT((s.transport_closed(p, v, w1) - sphere_transport(p, v, w1)).norm(), 1e-14);
    EXPECT_NEAR(t1.dot(t2), w1.dot(w2), 1e-8);
  }
}

TEST(ParallelTransport, IsometricAlongWigglyPath) {
  Rand r(7);
  const auto s = EmbeddedManifold::sphere2();
  std::vector<Point> path;
  for (int i = 0; i <= 300; ++i) {
    const double u = i / 300.0;
    path.push_back(Eigen::Vector3d(std::cos(3 * u), std::sin(5 * u), 1.0 + u).normalized());
  }
  const Eigen::Vector3d p = path.front();
  const Eigen::Vector3d w1 = random_tangent(r, p, 1.0), w2 = random_tangent(r, p, 2.0);
  const Point t1 = parallel_transport(s, path, w1), t2 = parallel_transport(s, path, w2);
  EXPECT_NEAR(t1.dot(t2), w1.dot(w2), 1e-8);
  EXPECT_NEAR(t1.norm(), 1.0, 1e-8);
  EXPECT_LT(std::abs(t1.dot(path.back())), 1e-10);
}

TEST(TubularProjection, Examples) {
  const auto s = EmbeddedManifold::sphere2();
  EXPECT_LT((tubular_projection(s, Eigen::Vector3d(0, 0, 2)) - Eigen::Vector3d(0, 0, 1)).norm(), 1e-15);
  const Eigen::Vector3d p = Eigen::Vector3d(2, 3, 6) / 7.0;
  EXPECT_LT((tubular_projection(s, p) - p).norm(), 1e-15);
  const auto f = EmbeddedManifold::flat(3);
  EXPECT_EQ(tubular_projection(f, Eigen::Vector3d(1, 2, 3)), Point(Eigen::Vector3d(1, 2, 3)));
  EXPECT_THROW((void)tubular_projection(s, Eigen::Vector3d(0.05, 0, 0)), Error);
}

TEST(TubularProjection, ResidualIsNormal) {
  Rand r(8);
  for (const auto& m : {EmbeddedManifold::sphere2(), EmbeddedManifold::torus2()}) {
    for (int i = 0; i < 20; ++i) {
      Point y = r.normal_vector(m.ambient_dim());
      if (m.kind() == ManifoldKind::Sphere) {
        y *= r.uniform(0.5, 2.0) / y.norm();
      } else {
        y.head(2) *= r.uniform(0.5, 2.0) / y.head(2).norm();
        y.tail(2) *= r.uniform(0.5, 2.0) / y.tail(2).norm();
      }
      const Point q = tubular_projection(m, y);
      EXPECT_LT(m.constraint_residual(q), 1e-10);
      EXPECT_LT((m.tangent_projector(q) * (y - q)).norm(), 1e-8);
    }
  }
}

TEST(Compression, RoundTrip) {
  const Compression phi;
  for (double r : {0.0, 0.1, 1.0, 3.0, 10.0, -2.0}) EXPECT_NEAR(phi.inverse(phi(r)), r, 1e-10 * std::max(1.0, r * r * r));
  EXPECT_THROW((void)phi.inverse(1.0), Error);
  EXPECT_NEAR(phi.derivative(0.5), (phi(0.5 + 1e-6) - phi(0.5 - 1e-6)) / 2e-6, 1e-8);
}

TEST(LocalAddition, ZeroSectionIsIdentity) {
  for (const auto& m : {EmbeddedManifold::sphere2(), EmbeddedManifold::torus2(), EmbeddedManifold::flat(2)}) {
    const auto spec = LocalAdditionSpec::standard(m);
    Point p = Point::Zero(m.ambient_dim());
    p(0) = 1.0;
    if (m.kind() == ManifoldKind::Torus) p(2) = 1.0;
    EXPECT_EQ(local_addition(spec, {p, Point::Zero(m.ambient_dim())}), p);
  }
}

TEST(LocalAddition, FlatLineExample) {
  const auto spec = LocalAdditionSpec::standard(EmbeddedManifold::flat(1));
  const Point q = local_addition(spec, {Eigen::VectorXd::Zero(1), Eigen::VectorXd::Ones(1)});
  EXPECT_NEAR(q(0), 0.70710678118654752, 1e-10);
}

TEST(LocalAddition, StandardEpsilons) {
  EXPECT_DOUBLE_EQ(LocalAdditionSpec::standard(EmbeddedManifold::sphere2()).epsilon, kPi / 2);
  EXPECT_DOUBLE_EQ(LocalAdditionSpec::standard(EmbeddedManifold::flat(2)).epsilon, 1.0);
  EXPECT_DOUBLE_EQ(LocalAdditionSpec::standard(EmbeddedManifold::torus2()).epsilon, 1.0);
}

TEST(LocalAddition, RoundTripFlatAndSphere) {
  Rand r(9);
  for (const auto& m : {EmbeddedManifold::sphere2(), EmbeddedManifold::flat(3)}) {
    const auto spec = LocalAdditionSpec::standard(m);
    for (int i = 0; i < 200; ++i) {
      const Point p = m.kind() == ManifoldKind::Sphere ? Point(r.unit3()) : Point(r.normal_vector(3));
      Point v = r.normal_vector(3);
      v = m.tangent_projector(p) * v;
      v *= r.uniform(0.0, 10.0) / v.norm();
      const Point q = local_addition(spec, {p, v});
      const TangentAtPoint back = local_addition_inv(spec, p, q);
      EXPECT_LT((back.vector - v).norm(), 1e-7);
      EXPECT_LT(spec.compress(v).norm(), spec.epsilon);
    }
  }
}

TEST(LocalAddition, InverseOutsideVThrows) {
  const auto spec = LocalAdditionSpec::standard(EmbeddedManifold::sphere2());
  try {
    (void)local_addition_inv(spec, Eigen::Vector3d(0, 0, 1), Eigen::Vector3d(0, 0, -1));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::OutOfV);
  }
  const auto flat = LocalAdditionSpec::standard(EmbeddedManifold::flat(1));
  EXPECT_THROW((void)local_addition_inv(flat, Eigen::VectorXd::Zero(1), Eigen::VectorXd::Constant(1, 1.5)), Error);
}

TEST(LocalAddition, InjectivePerFiber) {
  Rand r(10);
  const auto s = EmbeddedManifold::sphere2();
  const auto spec = LocalAdditionSpec::standard(s);
  int checked = 0;
  while (checked < 1000) {
    const Eigen::Vector3d p = r.unit3();
    const Eigen::Vector3d v = random_tangent(r, p, r.uniform(0.0, 5.0));
    const Eigen::Vector3d w = random_tangent(r, p, r.uniform(0.0, 5.0));
    if ((v - w).norm() < 1e-3) continue;
    ++checked;
    EXPECT_GE((local_addition(spec, {p, v}) - local_addition(spec, {p, w})).norm(), 1e-6);
  }
}

TEST(ProjectionLog, InvertsOnHemisphere) {
  Rand r(11);
  const auto s = EmbeddedManifold::sphere2();
  for (int i = 0; i < 20; ++i) {
    const Eigen::Vector3d p = r.unit3();
    const Eigen::Vector3d q = sphere_exp(p, random_tangent(r, p, r.uniform(0.0, 1.4)));
    const Eigen::VectorXd w = s.projection_log(p, q);
    EXPECT_LT((s.projection_exp(p, w) - q).norm(), 1e-12);
  }
  EXPECT_THROW((void)s.projection_exp(Eigen::Vector3d(0, 0, 1), Eigen::Vector3d(1.0, 0, 0)), Error);
}
