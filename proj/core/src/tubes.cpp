#include "loopspace/tubes.hpp"

#include <Eigen/Dense>

#include <cmath>
#include <numbers>

#include "loopspace/error.hpp"

namespace loopspace {
namespace {

Eigen::Vector2d quarter_turn(const Eigen::Vector2d& a) { return {-a.y(), a.x()}; }

double circle_angle(const Eigen::Vector2d& a, const Eigen::Vector2d& b) {
  return std::atan2(a.x() * b.y() - a.y() * b.x(), a.dot(b));
}

Eigen::Vector2d rotate_circle(const Eigen::Vector2d& a, double omega) {
  return std::cos(omega) * a + std::sin(omega) * quarter_turn(a);
}

}  // namespace

double BumpProfile::operator()(double t) const noexcept {
  if (t <= 1.0) return 1.0;
  if (t >= 2.0) return 0.0;
  const double a = std::exp(-1.0 / (2.0 - t));
  const double b = std::exp(-1.0 / (t - 1.0));
  return a / (a + b);
}

Eigen::VectorXd flow_in_fiber(const Eigen::VectorXd& w, const Eigen::VectorXd& sigma, int steps, BumpProfile bump) {
  if (steps < 1) raise(ErrorKind::InvalidArgument, "flow steps must be positive");
  if (sigma.squaredNorm() == 0.0) return w;
  auto field = [&](const Eigen::VectorXd& y) -> Eigen::VectorXd { return bump(y.squaredNorm()) * sigma; };
  const double h = 1.0 / steps;
  Eigen::VectorXd y = w;
  for (int i = 0; i < steps; ++i) {
    const Eigen::VectorXd k1 = field(y);
    const Eigen::VectorXd k2 = field(y + 0.5 * h * k1);
    const Eigen::VectorXd k3 = field(y + 0.5 * h * k2);
    const Eigen::VectorXd k4 = field(y + h * k3);
    y += (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
  }
  return y;
}

FlowDiffeo::FlowDiffeo(Eigen::VectorXd drive, int steps, BumpProfile bump)
    : drive_(std::move(drive)), steps_(steps), bump_(bump) {
  if (steps_ < 1) raise(ErrorKind::InvalidArgument, "flow steps must be positive");
}

Point FlowDiffeo::operator()(const Point& u) const {
  if (u.size() != drive_.size()) raise(ErrorKind::InvalidArgument, "flow dimension mismatch");
  return flow_in_fiber(u, drive_, steps_, bump_);
}

Point flow_point(const FlowDiffeo& fd, const Point& u) { return fd(u); }

CenteredChart::CenteredChart(const EmbeddedManifold& m, Point center)
    : manifold_(m), center_(std::move(center)) {
  manifold_.require_on(center_);
  basis_ = manifold_.tangent_basis(center_);
}

Point CenteredChart::from_coords(const Eigen::VectorXd& w) const {
  if (w.size() != manifold_.intrinsic_dim()) raise(ErrorKind::InvalidArgument, "chart coordinate size");
  switch (manifold_.kind()) {
    case ManifoldKind::Flat: return center_ + w;
    case ManifoldKind::Sphere: {
      const double r2 = w.squaredNorm();
      return ((1.0 - r2) * center_ + 2.0 * basis_ * w) / (1.0 + r2);
    }
    case ManifoldKind::Torus: {
      Point y(4);
      y << rotate_circle(center_.head<2>(), 2.0 * std::atan(w(0))),
          rotate_circle(center_.tail<2>(), 2.0 * std::atan(w(1)));
      return y;
    }
  }
  return center_;
}

std::optional<Eigen::VectorXd> CenteredChart::to_coords(const Point& y) const {
  switch (manifold_.kind()) {
    case ManifoldKind::Flat: return Eigen::VectorXd(y - center_);
    case ManifoldKind::Sphere: {
      const double denom = 1.0 + center_.dot(y);
      if (!(denom > 1e-12)) return std::nullopt;
      return Eigen::VectorXd(basis_.transpose() * y / denom);
    }
    case ManifoldKind::Torus: {
      const double a = circle_angle(center_.head<2>(), y.head<2>());
      const double b = circle_angle(center_.tail<2>(), y.tail<2>());
      const double limit = std::numbers::pi - 1e-12;
      if (std::abs(a) >= limit || std::abs(b) >= limit) return std::nullopt;
      return Eigen::Vector2d(std::tan(a / 2.0), std::tan(b / 2.0));
    }
  }
  return std::nullopt;
}

Eigen::MatrixXd CenteredChart::jacobian(const Eigen::VectorXd& w) const {
  switch (manifold_.kind()) {
    case ManifoldKind::Flat: return Eigen::MatrixXd::Identity(w.size(), w.size());
    case ManifoldKind::Sphere: {
      const double r2 = w.squaredNorm();
      const double d = 1.0 + r2;
      const Eigen::Vector3d num = (1.0 - r2) * center_ + 2.0 * basis_ * w;
      const Eigen::MatrixXd dnum = -2.0 * center_ * w.transpose() + 2.0 * basis_;
      return (dnum * d - 2.0 * num * w.transpose()) / (d * d);
    }
    case ManifoldKind::Torus: {
      const Point y = from_coords(w);
      Eigen::MatrixXd j = Eigen::MatrixXd::Zero(4, 2);
      j.col(0).head<2>() = 2.0 / (1.0 + w(0) * w(0)) * quarter_turn(y.head<2>());
      j.col(1).tail<2>() = 2.0 / (1.0 + w(1) * w(1)) * quarter_turn(y.tail<2>());
      return j;
    }
  }
  return {};
}

Point move_point(const CenteredChart& chart, const Eigen::VectorXd& drive, const Point& y, int steps) {
  if (drive.squaredNorm() == 0.0) return y;
  const auto w = chart.to_coords(y);
  if (!w || w->squaredNorm() >= 2.0) return y;
  return chart.from_coords(flow_in_fiber(*w, drive, steps));
}

namespace {

Eigen::VectorXd patch_drive(const CenteredChart& chart, const Point& u) {
  const auto w = chart.to_coords(u);
  if (!w || !(w->squaredNorm() < 1.0)) {
    raise(ErrorKind::OutsidePatch, "loop start point is outside the trivialising patch");
  }
  return *w;
}

}  // namespace

BasedLoop based_trivialize(const CenteredChart& chart, const SampledLoop& gamma, int steps) {
  const Point u = gamma.node(0);
  chart.manifold().require_on(u);
  const Eigen::VectorXd drive = patch_drive(chart, u);
  Eigen::MatrixXd omega(gamma.dim(), gamma.resolution());
  for (int j = 0; j < gamma.resolution(); ++j) omega.col(j) = move_point(chart, -drive, gamma.node(j), steps);
  return {SampledLoop(std::move(omega)), u};
}

SampledLoop based_untrivialize(const CenteredChart& chart, const BasedLoop& based, int steps) {
  const Eigen::VectorXd drive = patch_drive(chart, based.start);
  Eigen::MatrixXd gamma(based.omega.dim(), based.omega.resolution());
  for (int j = 0; j < based.omega.resolution(); ++j) {
    gamma.col(j) = move_point(chart, drive, based.omega.node(j), steps);
  }
  return SampledLoop(std::move(gamma));
}

SquaredPartition SquaredPartition::standard(const EmbeddedManifold& m) {
  SquaredPartition p(m);
  if (m.kind() == ManifoldKind::Sphere) {
    p.charts_.emplace_back(m, Eigen::Vector3d(0.0, 0.0, 1.0));
    p.charts_.emplace_back(m, Eigen::Vector3d(0.0, 0.0, -1.0));
  } else {
    p.global_frame_ = true;
  }
  return p;
}

double SquaredPartition::weight(int patch, const Point& x) const {
  if (global_frame_) return 1.0;
  const double z = x(2);
  const double sq = patch == 0 ? 0.5 * (1.0 + z) : 0.5 * (1.0 - z);
  return std::sqrt(std::max(0.0, sq));
}

std::optional<Eigen::VectorXd> SquaredPartition::to_fiber(int patch, const Point& x, const Eigen::VectorXd& v) const {
  if (global_frame_) return Eigen::VectorXd(manifold_.tangent_basis(x).transpose() * v);
  const CenteredChart& chart = charts_.at(static_cast<std::size_t>(patch));
  const auto w = chart.to_coords(x);
  if (!w) return std::nullopt;
  const Eigen::MatrixXd j = chart.jacobian(*w);
  return Eigen::VectorXd((j.transpose() * j).ldlt().solve(j.transpose() * v));
}

std::optional<Eigen::VectorXd> SquaredPartition::from_fiber(int patch, const Point& x, const Eigen::VectorXd& c) const {
  if (global_frame_) return Eigen::VectorXd(manifold_.tangent_basis(x) * c);
  const CenteredChart& chart = charts_.at(static_cast<std::size_t>(patch));
  const auto w = chart.to_coords(x);
  if (!w) return std::nullopt;
  return Eigen::VectorXd(chart.jacobian(*w) * c);
}

PouSection::PouSection(SquaredPartition partition, TangentAtPoint v)
    : partition_(std::move(partition)), v_(std::move(v)) {
  partition_.manifold().require_on(v_.base);
}

Eigen::VectorXd PouSection::operator()(const Point& x) const {
  Eigen::VectorXd acc = Eigen::VectorXd::Zero(v_.vector.size());
  const int patches = partition_.patches();
  for (int l = 0; l < patches; ++l) {
    const double wp = partition_.weight(l, v_.base);
    const double wx = partition_.weight(l, x);
    if (wp == 0.0 || wx == 0.0) continue;
    const auto c = partition_.to_fiber(l, v_.base, v_.vector);
    if (!c) continue;
    const auto e = partition_.from_fiber(l, x, *c);
    if (!e) continue;
    acc += wp * wx * *e;
  }
  return acc;
}

PouSection pou_section(const SquaredPartition& partition, const TangentAtPoint& v) { return {partition, v}; }

TubeGeometry TubeGeometry::point(const EmbeddedManifold& m, const Point& x0) {
  return {Kind::Point, m, CenteredChart(m, x0), std::nullopt};
}

TubeGeometry TubeGeometry::diagonal(const EmbeddedManifold& m) {
  return {Kind::Diagonal, m, std::nullopt, SquaredPartition::standard(m)};
}

int TubeGeometry::ambient_dim() const noexcept {
  return kind_ == Kind::Point ? manifold_.ambient_dim() : 2 * manifold_.ambient_dim();
}

Point TubeGeometry::embed(const Point& q) const {
  if (kind_ == Kind::Point) return chart_->center();
  Point y(2 * q.size());
  y << q, q;
  return y;
}

Point TubeGeometry::nu(const Point& q, const Eigen::VectorXd& w) const {
  if (kind_ == Kind::Point) return chart_->from_coords(w);
  Point y(2 * q.size());
  y << manifold_.exp_closed(q, -w), manifold_.exp_closed(q, w);
  return y;
}

std::optional<TubeGeometry::NormalCoords> TubeGeometry::nu_inverse(const Point& y) const {
  if (kind_ == Kind::Point) {
    const auto w = chart_->to_coords(y);
    if (!w) return std::nullopt;
    return NormalCoords{chart_->center(), *w};
  }
  const int k = manifold_.ambient_dim();
  const Point a = y.head(k), b = y.tail(k);
  if (!manifold_.contains(a) || !manifold_.contains(b)) return std::nullopt;
  try {
    const Point p = manifold_.nearest_point(0.5 * (a + b));
    const Eigen::VectorXd w = manifold_.log_closed(p, b);
    if (manifold_.kind() != ManifoldKind::Flat && !(w.norm() < std::numbers::pi / 2.0)) return std::nullopt;
    return NormalCoords{p, w};
  } catch (const Error&) {
    return std::nullopt;
  }
}

std::optional<Point> TubeGeometry::base_of(const Point& y, double tol) const {
  if (y.size() != ambient_dim()) return std::nullopt;
  if (kind_ == Kind::Point) {
    if ((y - chart_->center()).norm() <= tol) return chart_->center();
    return std::nullopt;
  }
  const int k = manifold_.ambient_dim();
  if ((y.head(k) - y.tail(k)).norm() <= tol && manifold_.contains(y.head(k))) return Point(y.head(k));
  return std::nullopt;
}

Eigen::VectorXd TubeGeometry::spread(const Point& q0, const Eigen::VectorXd& v, const Point& q) const {
  if (kind_ == Kind::Point) return v;
  return PouSection(*partition_, {q0, v})(q);
}

Point TubeGeometry::move(const Point& q0, const Eigen::VectorXd& v, const Point& y, int steps) const {
  if (v.squaredNorm() == 0.0) return y;
  const auto nc = nu_inverse(y);
  if (!nc || nc->vector.squaredNorm() >= 2.0) return y;
  const Eigen::VectorXd sigma = spread(q0, v, nc->base);
  return nu(nc->base, flow_in_fiber(nc->vector, sigma, steps));
}

namespace {

void require_fibre_vector(const TubeGeometry& tube, const Point& q, const Eigen::VectorXd& v) {
  const EmbeddedManifold& m = tube.manifold();
  const int expected = tube.kind() == TubeGeometry::Kind::Point ? m.intrinsic_dim() : m.ambient_dim();
  if (v.size() != expected) raise(ErrorKind::InvalidArgument, "normal vector has the wrong size");
  if (tube.kind() == TubeGeometry::Kind::Diagonal &&
      (v - m.tangent_projector(q) * v).norm() > 1e-10 * std::max(1.0, v.norm())) {
    raise(ErrorKind::InvalidArgument, "normal vector is not in the fibre over alpha(0)");
  }
  if (!(v.norm() < 1.0)) raise(ErrorKind::OutsideTube, "normal vector outside the unit tube");
}

}  // namespace

SampledLoop tube_LP(const TubeGeometry& tube, const SampledLoop& alpha, const Eigen::VectorXd& v, int steps) {
  const auto q0 = tube.base_of(alpha.node(0));
  if (!q0) raise(ErrorKind::InvalidArgument, "alpha(0) does not lie on P");
  require_fibre_vector(tube, *q0, v);
  Eigen::MatrixXd out(alpha.dim(), alpha.resolution());
  for (int j = 0; j < alpha.resolution(); ++j) out.col(j) = tube.move(*q0, v, alpha.node(j), steps);
  return SampledLoop(std::move(out));
}

TubeCoords tube_LP_inverse(const TubeGeometry& tube, const SampledLoop& zeta, int steps) {
  const auto nc = tube.nu_inverse(zeta.node(0));
  if (!nc || !(nc->vector.norm() < 1.0)) raise(ErrorKind::OutsideTube, "loop start is outside the tube");
  const Eigen::VectorXd back = -nc->vector;
  Eigen::MatrixXd out(zeta.dim(), zeta.resolution());
  for (int j = 0; j < zeta.resolution(); ++j) out.col(j) = tube.move(nc->base, back, zeta.node(j), steps);
  return {SampledLoop(std::move(out)), nc->base, nc->vector};
}

std::vector<int> CircleSubgroup::coset_offsets(int n) const {
  std::vector<int> offsets;
  if (is_full()) {
    offsets.resize(static_cast<std::size_t>(n));
    for (int j = 0; j < n; ++j) offsets[static_cast<std::size_t>(j)] = j;
    return offsets;
  }
  if (order < 1 || n % order != 0) {
    raise(ErrorKind::InvalidArgument, "group order must divide the loop resolution");
  }
  const int period = n / order;
  for (int i = 0; i < order; ++i) offsets.push_back(i * period);
  return offsets;
}

Point local_average(const EmbeddedManifold& m, const FinitePointMap& beta) {
  if (beta.values.empty()) raise(ErrorKind::InvalidArgument, "empty point map");
  Eigen::VectorXd mean = Eigen::VectorXd::Zero(m.ambient_dim());
  for (const Point& p : beta.values) {
    m.require_on(p);
    mean += p;
  }
  mean /= static_cast<double>(beta.values.size());
  return tubular_projection(m, mean);
}

namespace {

int coset_period(CircleSubgroup group, int n) {
  (void)group.coset_offsets(n);
  return group.is_full() ? 1 : n / group.order;
}

SampledLoop fixed_part(const EmbeddedManifold& m, CircleSubgroup group, const SampledLoop& gamma) {
  const int n = gamma.resolution();
  const std::vector<int> offsets = group.coset_offsets(n);
  const int period = coset_period(group, n);
  Eigen::MatrixXd fixed(gamma.dim(), n);
  for (int j = 0; j < period; ++j) {
    FinitePointMap coset{group, {}};
    coset.values.reserve(offsets.size());
    for (int o : offsets) coset.values.push_back(gamma.node(j + o));
    Point avg;
    try {
      avg = local_average(m, coset);
    } catch (const Error& e) {
      if (e.kind() == ErrorKind::OutsideTube) {
        raise(ErrorKind::OutsideAveragingDomain, "coset mean is outside the tubular neighbourhood");
      }
      throw;
    }
    for (int r = j; r < n; r += period) fixed.col(r) = avg;
  }
  return SampledLoop(std::move(fixed));
}

template <class Scale>
SampledLoop per_coset(CircleSubgroup group, const SampledLoop& normal, Scale&& scale) {
  const int n = normal.resolution();
  const std::vector<int> offsets = group.coset_offsets(n);
  const int period = coset_period(group, n);
  Eigen::MatrixXd out = normal.samples();
  for (int j = 0; j < period; ++j) {
    double sup = 0.0;
    for (int o : offsets) sup = std::max(sup, normal.samples().col(j + o).norm());
    if (sup == 0.0) continue;
    const double factor = scale(sup);
    for (int o : offsets) out.col(j + o) *= factor;
  }
  return SampledLoop(std::move(out));
}

}  // namespace

EquivariantSplit equivariant_decompose(const EmbeddedManifold& m, CircleSubgroup group, const SampledLoop& gamma) {
  SampledLoop fixed = fixed_part(m, group, gamma);
  const int n = gamma.resolution();
  Eigen::MatrixXd normal(gamma.dim(), n);
  for (int j = 0; j < n; ++j) {
    const Point p = fixed.node(j);
    const Point q = gamma.node(j);
    normal.col(j) = m.projection_log(p, q);
    const Point back = m.projection_exp(p, normal.col(j));
    if ((back - q).norm() > 1e-8) {
      raise(ErrorKind::OutsideAveragingDomain, "loop leaves the averaging domain at node " + std::to_string(j));
    }
  }
  TangentSection section(m, fixed, SampledLoop(std::move(normal)));
  return {std::move(fixed), std::move(section)};
}

SampledLoop equivariant_recompose(const EmbeddedManifold& m, const EquivariantSplit& split) {
  const int n = split.fixed.resolution();
  Eigen::MatrixXd out(split.fixed.dim(), n);
  for (int j = 0; j < n; ++j) out.col(j) = m.projection_exp(split.fixed.node(j), split.normal.vectors().node(j));
  return SampledLoop(std::move(out));
}

SampledLoop compress_normal(CircleSubgroup group, const SampledLoop& normal, double epsilon, Compression phi) {
  return per_coset(group, normal, [&](double sup) { return epsilon * phi(sup) / sup; });
}

SampledLoop decompress_normal(CircleSubgroup group, const SampledLoop& normal, double epsilon, Compression phi) {
  return per_coset(group, normal, [&](double sup) {
    const double s = sup / epsilon;
    if (!(s < 1.0)) raise(ErrorKind::OutsideAveragingDomain, "normal data beyond the compression radius");
    return phi.inverse(s) / sup;
  });
}

double equivariant_epsilon(const EmbeddedManifold& m) { return m.kind() == ManifoldKind::Flat ? 1.0 : 0.9; }

SampledLoop equivariant_tube(const EmbeddedManifold& m, CircleSubgroup group, const TangentSection& normal) {
  const double eps = equivariant_epsilon(m);
  SampledLoop compressed = compress_normal(group, normal.vectors(), eps);
  return equivariant_recompose(m, {normal.base(), TangentSection(m, normal.base(), std::move(compressed))});
}

EquivariantSplit equivariant_tube_inverse(const EmbeddedManifold& m, CircleSubgroup group, const SampledLoop& gamma) {
  EquivariantSplit split = equivariant_decompose(m, group, gamma);
  SampledLoop raw = decompress_normal(group, split.normal.vectors(), equivariant_epsilon(m));
  return {split.fixed, TangentSection(m, split.fixed, std::move(raw))};
}

}  // namespace loopspace
