#include "loopspace/manifold.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <charconv>
#include <cmath>
#include <numbers>

#include "loopspace/error.hpp"

namespace loopspace {
namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kCutLocusMargin = 1e-6;
constexpr double kTubeFloor = 0.1;

Eigen::Vector2d quarter_turn(const Eigen::Vector2d& a) { return {-a.y(), a.x()}; }

double planar_cross(const Eigen::Vector2d& a, const Eigen::Vector2d& b) {
  return a.x() * b.y() - a.y() * b.x();
}

// Signed angle from a to b on the unit circle.
double circle_angle(const Eigen::Vector2d& a, const Eigen::Vector2d& b) {
  return std::atan2(planar_cross(a, b), a.dot(b));
}

Eigen::Vector2d rotate_circle(const Eigen::Vector2d& a, double omega) {
  return std::cos(omega) * a + std::sin(omega) * quarter_turn(a);
}

void require_dim(const EmbeddedManifold& m, const Eigen::VectorXd& x, const char* what) {
  if (x.size() != m.ambient_dim()) {
    raise(ErrorKind::InvalidArgument, std::string(what) + " has wrong ambient dimension");
  }
}

}  // namespace

EmbeddedManifold EmbeddedManifold::flat(int n) {
  if (n < 1) raise(ErrorKind::InvalidArgument, "flat dimension must be positive");
  return {ManifoldKind::Flat, n, n};
}

EmbeddedManifold EmbeddedManifold::sphere2() { return {ManifoldKind::Sphere, 3, 2}; }
EmbeddedManifold EmbeddedManifold::torus2() { return {ManifoldKind::Torus, 4, 2}; }

EmbeddedManifold EmbeddedManifold::from_tag(std::string_view tag) {
  if (tag == "sphere2") return sphere2();
  if (tag == "torus2") return torus2();
  if (tag.starts_with("flat:")) {
    const auto digits = tag.substr(5);
    int n = 0;
    const auto [ptr, ec] = std::from_chars(digits.data(), digits.data() + digits.size(), n);
    if (ec == std::errc{} && ptr == digits.data() + digits.size() && n >= 1) return flat(n);
  }
  raise(ErrorKind::InvalidArgument, "unknown manifold tag '" + std::string(tag) + "'");
}

std::string EmbeddedManifold::tag() const {
  switch (kind_) {
    case ManifoldKind::Flat: return "flat:" + std::to_string(ambient_);
    case ManifoldKind::Sphere: return "sphere2";
    case ManifoldKind::Torus: return "torus2";
  }
  return {};
}

double EmbeddedManifold::constraint_residual(const Point& p) const {
  require_dim(*this, p, "point");
  switch (kind_) {
    case ManifoldKind::Flat: return 0.0;
    case ManifoldKind::Sphere: return std::abs(p.squaredNorm() - 1.0);
    case ManifoldKind::Torus:
      return std::max(std::abs(p.head<2>().squaredNorm() - 1.0),
                      std::abs(p.tail<2>().squaredNorm() - 1.0));
  }
  return 0.0;
}

bool EmbeddedManifold::contains(const Point& p, double tol) const {
  return p.size() == ambient_ && p.allFinite() && constraint_residual(p) <= tol;
}

void EmbeddedManifold::require_on(const Point& p) const {
  if (!contains(p)) raise(ErrorKind::OffManifold, "point is not on " + tag());
}

Eigen::MatrixXd EmbeddedManifold::tangent_projector(const Point& p) const {
  require_dim(*this, p, "point");
  Eigen::MatrixXd proj = Eigen::MatrixXd::Identity(ambient_, ambient_);
  switch (kind_) {
    case ManifoldKind::Flat: break;
    case ManifoldKind::Sphere: proj -= p * p.transpose(); break;
    case ManifoldKind::Torus:
      proj.topLeftCorner<2, 2>() -= p.head<2>() * p.head<2>().transpose();
      proj.bottomRightCorner<2, 2>() -= p.tail<2>() * p.tail<2>().transpose();
      break;
  }
  return proj;
}

Eigen::MatrixXd EmbeddedManifold::tangent_basis(const Point& p) const {
  require_dim(*this, p, "point");
  switch (kind_) {
    case ManifoldKind::Flat: return Eigen::MatrixXd::Identity(ambient_, ambient_);
    case ManifoldKind::Sphere: {
      const Eigen::Vector3d n = p.normalized();
      Eigen::Index axis = 0;
      n.cwiseAbs().minCoeff(&axis);
      Eigen::Vector3d e1 = Eigen::Vector3d::Unit(axis) - n(axis) * n;
      e1.normalize();
      const Eigen::Vector3d e2 = n.cross(e1);
      Eigen::MatrixXd basis(3, 2);
      basis << e1, e2;
      return basis;
    }
    case ManifoldKind::Torus: {
      Eigen::MatrixXd basis = Eigen::MatrixXd::Zero(4, 2);
      basis.col(0).head<2>() = quarter_turn(p.head<2>()).normalized();
      basis.col(1).tail<2>() = quarter_turn(p.tail<2>()).normalized();
      return basis;
    }
  }
  return {};
}

Eigen::VectorXd EmbeddedManifold::geodesic_acceleration(const Point& p, const Eigen::VectorXd& v) const {
  switch (kind_) {
    case ManifoldKind::Flat: return Eigen::VectorXd::Zero(ambient_);
    case ManifoldKind::Sphere: return -v.squaredNorm() / p.squaredNorm() * p;
    case ManifoldKind::Torus: {
      Eigen::VectorXd acc(4);
      acc.head<2>() = -v.head<2>().squaredNorm() / p.head<2>().squaredNorm() * p.head<2>();
      acc.tail<2>() = -v.tail<2>().squaredNorm() / p.tail<2>().squaredNorm() * p.tail<2>();
      return acc;
    }
  }
  return {};
}

Point EmbeddedManifold::nearest_point(const Point& x) const {
  require_dim(*this, x, "point");
  switch (kind_) {
    case ManifoldKind::Flat: return x;
    case ManifoldKind::Sphere: {
      const double r = x.norm();
      if (!(r > kTubeFloor)) raise(ErrorKind::OutsideTube, "point too close to the sphere centre");
      return x / r;
    }
    case ManifoldKind::Torus: {
      const double ra = x.head<2>().norm();
      const double rb = x.tail<2>().norm();
      if (!(ra > kTubeFloor && rb > kTubeFloor)) {
        raise(ErrorKind::OutsideTube, "point too close to a torus factor axis");
      }
      Point out(4);
      out << x.head<2>() / ra, x.tail<2>() / rb;
      return out;
    }
  }
  return x;
}

double EmbeddedManifold::distance(const Point& p, const Point& q) const {
  switch (kind_) {
    case ManifoldKind::Flat: return (q - p).norm();
    case ManifoldKind::Sphere: {
      const Eigen::Vector3d a = p, b = q;
      return std::atan2(a.cross(b).norm(), a.dot(b));
    }
    case ManifoldKind::Torus:
      return std::hypot(circle_angle(p.head<2>(), q.head<2>()), circle_angle(p.tail<2>(), q.tail<2>()));
  }
  return 0.0;
}

double EmbeddedManifold::injectivity_radius() const noexcept {
  return kind_ == ManifoldKind::Flat ? std::numeric_limits<double>::infinity() : kPi;
}

Point EmbeddedManifold::exp_closed(const Point& p, const Eigen::VectorXd& v) const {
  switch (kind_) {
    case ManifoldKind::Flat: return p + v;
    case ManifoldKind::Sphere: {
      const double theta = v.norm();
      if (theta == 0.0) return p;
      return std::cos(theta) * p + (std::sin(theta) / theta) * v;
    }
    case ManifoldKind::Torus: {
      Point out(4);
      const Eigen::Vector2d a = p.head<2>(), b = p.tail<2>();
      out << rotate_circle(a, v.head<2>().dot(quarter_turn(a))),
          rotate_circle(b, v.tail<2>().dot(quarter_turn(b)));
      return out;
    }
  }
  return p;
}

Eigen::VectorXd EmbeddedManifold::log_closed(const Point& p, const Point& q) const {
  switch (kind_) {
    case ManifoldKind::Flat: return q - p;
    case ManifoldKind::Sphere: {
      const Eigen::Vector3d a = p, b = q;
      const double c = a.dot(b);
      const Eigen::Vector3d w = b - c * a;
      const double s = w.norm();
      const double theta = std::atan2(a.cross(b).norm(), c);
      if (theta > kPi - kCutLocusMargin) {
        raise(ErrorKind::OutOfInjectivityDomain, "points are (nearly) antipodal");
      }
      if (s == 0.0) return Eigen::VectorXd::Zero(3);
      return (theta / s) * w;
    }
    case ManifoldKind::Torus: {
      const Eigen::Vector2d a = p.head<2>(), b = p.tail<2>();
      const double wa = circle_angle(a, q.head<2>());
      const double wb = circle_angle(b, q.tail<2>());
      if (std::abs(wa) > kPi - kCutLocusMargin || std::abs(wb) > kPi - kCutLocusMargin) {
        raise(ErrorKind::OutOfInjectivityDomain, "a torus factor is (nearly) antipodal");
      }
      Eigen::VectorXd out(4);
      out << wa * quarter_turn(a), wb * quarter_turn(b);
      return out;
    }
  }
  return {};
}

Eigen::VectorXd EmbeddedManifold::transport_closed(const Point& p, const Eigen::VectorXd& v,
                                                   const Eigen::VectorXd& w) const {
  switch (kind_) {
    case ManifoldKind::Flat: return w;
    case ManifoldKind::Sphere: {
      const double theta = v.norm();
      if (theta == 0.0) return w;
      const Eigen::VectorXd u = v / theta;
      const double along = w.dot(u);
      return w - along * u + along * (std::cos(theta) * u - std::sin(theta) * p);
    }
    case ManifoldKind::Torus: {
      const Point q = exp_closed(p, v);
      const Eigen::Vector2d a = p.head<2>(), b = p.tail<2>();
      Eigen::VectorXd out(4);
      out << w.head<2>().dot(quarter_turn(a)) * quarter_turn(q.head<2>()),
          w.tail<2>().dot(quarter_turn(b)) * quarter_turn(q.tail<2>());
      return out;
    }
  }
  return w;
}

Eigen::VectorXd EmbeddedManifold::projection_log(const Point& p, const Point& q) const {
  return tangent_projector(p) * (q - p);
}

Point EmbeddedManifold::projection_exp(const Point& p, const Eigen::VectorXd& w) const {
  auto lift = [](const Eigen::VectorXd& base, const Eigen::VectorXd& tangent) -> Eigen::VectorXd {
    const double s = tangent.squaredNorm();
    if (!(s < 1.0)) {
      raise(ErrorKind::OutsideAveragingDomain, "projected vector leaves the graph domain");
    }
    return std::sqrt(1.0 - s) * base + tangent;
  };
  switch (kind_) {
    case ManifoldKind::Flat: return p + w;
    case ManifoldKind::Sphere: return lift(p, w);
    case ManifoldKind::Torus: {
      Point out(4);
      out << lift(p.head<2>(), w.head<2>()), lift(p.tail<2>(), w.tail<2>());
      return out;
    }
  }
  return p;
}

TangentAtPoint project_tangent(const EmbeddedManifold& m, const Point& p, const Eigen::VectorXd& w) {
  m.require_on(p);
  require_dim(m, w, "vector");
  return {p, m.tangent_projector(p) * w};
}

namespace {

void require_tangent(const EmbeddedManifold& m, const TangentAtPoint& v) {
  m.require_on(v.base);
  require_dim(m, v.vector, "vector");
  const Eigen::VectorXd off = v.vector - m.tangent_projector(v.base) * v.vector;
  if (off.norm() > 1e-8 * std::max(1.0, v.vector.norm())) {
    raise(ErrorKind::InvalidArgument, "vector is not tangent at its base point");
  }
}

}  // namespace

std::vector<GeodesicState> geodesic_trajectory(const EmbeddedManifold& m, const TangentAtPoint& v,
                                               double time, int steps) {
  require_tangent(m, v);
  if (steps < 1) raise(ErrorKind::InvalidArgument, "steps must be positive");
  std::vector<GeodesicState> states;
  states.reserve(static_cast<std::size_t>(steps) + 1);
  Eigen::VectorXd x = v.base;
  Eigen::VectorXd u = v.vector;
  states.push_back({x, u});
  const double h = time / steps;
  for (int i = 0; i < steps; ++i) {
    const Eigen::VectorXd k1x = u;
    const Eigen::VectorXd k1u = m.geodesic_acceleration(x, u);
    const Eigen::VectorXd k2x = u + 0.5 * h * k1u;
    const Eigen::VectorXd k2u = m.geodesic_acceleration(x + 0.5 * h * k1x, k2x);
    const Eigen::VectorXd k3x = u + 0.5 * h * k2u;
    const Eigen::VectorXd k3u = m.geodesic_acceleration(x + 0.5 * h * k2x, k3x);
    const Eigen::VectorXd k4x = u + h * k3u;
    const Eigen::VectorXd k4u = m.geodesic_acceleration(x + h * k3x, k4x);
    x += (h / 6.0) * (k1x + 2.0 * k2x + 2.0 * k3x + k4x);
    u += (h / 6.0) * (k1u + 2.0 * k2u + 2.0 * k3u + k4u);
    if (!x.allFinite() || !u.allFinite() || m.constraint_residual(x) > kDivergenceTol) {
      raise(ErrorKind::IntegrationDiverged, "geodesic left the manifold; increase steps");
    }
    x = m.nearest_point(x);
    u = m.tangent_projector(x) * u;
    states.push_back({x, u});
  }
  return states;
}

Point exp_map(const EmbeddedManifold& m, const TangentAtPoint& v, int steps) {
  if (m.kind() == ManifoldKind::Flat) {
    require_tangent(m, v);
    return v.base + v.vector;
  }
  if (v.vector.squaredNorm() == 0.0) {
    m.require_on(v.base);
    return v.base;
  }
  return geodesic_trajectory(m, v, 1.0, steps).back().position;
}

TangentAtPoint log_map(const EmbeddedManifold& m, const Point& p, const Point& q) {
  m.require_on(p);
  m.require_on(q);
  return {p, m.log_closed(p, q)};
}

TangentAtPoint log_map_shooting(const EmbeddedManifold& m, const Point& p, const Point& q, int steps,
                                int max_iterations) {
  m.require_on(p);
  m.require_on(q);
  if (m.kind() == ManifoldKind::Flat) return {p, q - p};
  const Eigen::MatrixXd basis = m.tangent_basis(p);
  Eigen::VectorXd coords = basis.transpose() * m.projection_log(p, q);
  const double fd_step = 1e-6;
  for (int it = 0; it < max_iterations; ++it) {
    const Eigen::VectorXd residual = exp_map(m, {p, basis * coords}, steps) - q;
    if (residual.norm() < 1e-11) return {p, basis * coords};
    Eigen::MatrixXd jac(m.ambient_dim(), m.intrinsic_dim());
    for (int c = 0; c < m.intrinsic_dim(); ++c) {
      Eigen::VectorXd e = Eigen::VectorXd::Zero(m.intrinsic_dim());
      e(c) = fd_step;
      jac.col(c) = (exp_map(m, {p, basis * (coords + e)}, steps) -
                    exp_map(m, {p, basis * (coords - e)}, steps)) / (2.0 * fd_step);
    }
    coords -= jac.colPivHouseholderQr().solve(residual);
    if (!coords.allFinite()) break;
  }
  raise(ErrorKind::ShootingFailed, "Newton shooting did not converge");
}

Eigen::VectorXd parallel_transport(const EmbeddedManifold& m, std::span<const Point> path,
                                   const Eigen::VectorXd& v) {
  if (path.empty()) raise(ErrorKind::InvalidArgument, "empty path");
  require_tangent(m, {path.front(), v});
  if (m.kind() == ManifoldKind::Flat) return v;
  for (const Point& node : path) {
    if (!node.allFinite() || m.constraint_residual(node) > kDivergenceTol) {
      raise(ErrorKind::IntegrationDiverged, "transport path leaves the manifold");
    }
  }
  Eigen::VectorXd w = v;
  Eigen::MatrixXd from = m.tangent_basis(path.front());
  for (std::size_t i = 1; i < path.size(); ++i) {
    const Eigen::MatrixXd to = m.tangent_basis(path[i]);
    // Orthogonal polar factor of the projection T_{c_i}M -> T_{c_{i+1}}M.
    const Eigen::MatrixXd overlap = to.transpose() * from;
    const Eigen::JacobiSVD<Eigen::MatrixXd> svd(overlap, Eigen::ComputeFullU | Eigen::ComputeFullV);
    if (svd.singularValues().minCoeff() < 1e-3) {
      raise(ErrorKind::IntegrationDiverged, "consecutive path nodes too far apart for transport");
    }
    const Eigen::MatrixXd rotation = svd.matrixU() * svd.matrixV().transpose();
    w = to * (rotation * (from.transpose() * w));
    from = to;
  }
  return w;
}

Point tubular_projection(const EmbeddedManifold& m, const Point& x) { return m.nearest_point(x); }

double Compression::operator()(double r) const {
  const double gr = gain * r;
  return gr / std::sqrt(1.0 + gr * gr);
}

double Compression::inverse(double s) const {
  if (!(std::abs(s) < 1.0)) raise(ErrorKind::OutOfV, "compressed radius outside (-1, 1)");
  return s / (gain * std::sqrt(1.0 - s * s));
}

double Compression::derivative(double r) const {
  const double gr = gain * r;
  return gain / std::pow(1.0 + gr * gr, 1.5);
}

LocalAdditionSpec LocalAdditionSpec::standard(const EmbeddedManifold& m) {
  return {m, m.kind() == ManifoldKind::Sphere ? kPi / 2.0 : 1.0, Compression{}};
}

Eigen::VectorXd LocalAdditionSpec::compress(const Eigen::VectorXd& v) const {
  const double r = v.norm();
  if (r == 0.0) return Eigen::VectorXd::Zero(v.size());
  return (epsilon * compression(r) / r) * v;
}

Eigen::VectorXd LocalAdditionSpec::decompress(const Eigen::VectorXd& w) const {
  const double s = w.norm();
  if (s == 0.0) return Eigen::VectorXd::Zero(w.size());
  return (compression.inverse(s / epsilon) / s) * w;
}

Point local_addition(const LocalAdditionSpec& spec, const TangentAtPoint& v) {
  require_tangent(spec.manifold, v);
  return spec.manifold.exp_closed(v.base, spec.compress(v.vector));
}

TangentAtPoint local_addition_inv(const LocalAdditionSpec& spec, const Point& p, const Point& q) {
  const EmbeddedManifold& m = spec.manifold;
  m.require_on(p);
  m.require_on(q);
  if (!(m.distance(p, q) < spec.reach())) raise(ErrorKind::OutOfV, "pair is outside V");
  return {p, spec.decompress(m.log_closed(p, q))};
}

}  // namespace loopspace
