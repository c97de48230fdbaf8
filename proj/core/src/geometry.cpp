#include "loopspace/geometry.hpp"

#include <Eigen/Dense>

#include <cmath>
#include <numbers>
#include <random>

#include "loopspace/error.hpp"

namespace loopspace {

LoopPath::LoopPath(const EmbeddedManifold& m, std::vector<SampledLoop> loops, double duration)
    : loops_(std::move(loops)), duration_(duration) {
  if (loops_.size() < 2) raise(ErrorKind::InvalidArgument, "a path needs at least two loops");
  if (!(duration_ > 0.0)) raise(ErrorKind::InvalidArgument, "path duration must be positive");
  const int n = loops_.front().resolution();
  for (const SampledLoop& loop : loops_) {
    if (loop.resolution() != n || loop.dim() != m.ambient_dim()) {
      raise(ErrorKind::InvalidArgument, "path loops must share resolution and ambient dimension");
    }
    for (int j = 0; j < n; ++j) m.require_on(loop.node(j));
  }
}

std::vector<Point> LoopPath::node_trace(int j) const {
  std::vector<Point> trace;
  trace.reserve(loops_.size());
  for (const SampledLoop& loop : loops_) trace.push_back(loop.node(j));
  return trace;
}

Connection Connection::levi_civita(const EmbeddedManifold& m) { return {m, TorsionTensor{}}; }

Connection Connection::flat_with_torsion(int n, TorsionTensor torsion) {
  if (!torsion) raise(ErrorKind::InvalidArgument, "torsion tensor must be callable");
  return {EmbeddedManifold::flat(n), std::move(torsion)};
}

Eigen::VectorXd Connection::connector(const Point& p, const Eigen::VectorXd& value,
                                      const Eigen::VectorXd& base_velocity,
                                      const Eigen::VectorXd& value_velocity) const {
  if (torsion_) return value_velocity + 0.5 * torsion_(base_velocity, value);
  if (manifold_.kind() == ManifoldKind::Flat) return value_velocity;
  return manifold_.tangent_projector(p) * value_velocity;
}

Eigen::VectorXd Connection::torsion_at(const Point& /*p*/, const Eigen::VectorXd& u,
                                       const Eigen::VectorXd& v) const {
  if (torsion_) return torsion_(u, v);
  return Eigen::VectorXd::Zero(u.size());
}

double l2_inner(const TangentSection& beta, const TangentSection& gamma) {
  require_same_base(beta.base(), gamma.base());
  const Eigen::MatrixXd& b = beta.vectors().samples();
  const Eigen::MatrixXd& c = gamma.vectors().samples();
  double acc = 0.0;
  for (Eigen::Index j = 0; j < b.cols(); ++j) {
    double local = 0.0;
    for (Eigen::Index r = 0; r < b.rows(); ++r) local += b(r, j) * c(r, j);
    acc += local;
  }
  return acc / static_cast<double>(b.cols());
}

PathField path_time_derivative(const PathField& field, double spacing) {
  const int intervals = static_cast<int>(field.size()) - 1;
  if (intervals < 4) raise(ErrorKind::GridTooCoarse, "path-time differences need T >= 4");
  const double scale = 1.0 / (12.0 * spacing);
  auto combo = [&](std::initializer_list<std::pair<int, double>> terms) {
    Eigen::MatrixXd acc = Eigen::MatrixXd::Zero(field.front().dim(), field.front().resolution());
    for (const auto& [idx, w] : terms) acc += w * field[static_cast<std::size_t>(idx)].samples();
    return SampledLoop(scale * acc);
  };
  const int t = intervals;
  PathField out;
  out.reserve(field.size());
  out.push_back(combo({{0, -25.0}, {1, 48.0}, {2, -36.0}, {3, 16.0}, {4, -3.0}}));
  out.push_back(combo({{0, -3.0}, {1, -10.0}, {2, 18.0}, {3, -6.0}, {4, 1.0}}));
  for (int i = 2; i <= t - 2; ++i) {
    out.push_back(combo({{i - 2, 1.0}, {i - 1, -8.0}, {i + 1, 8.0}, {i + 2, -1.0}}));
  }
  out.push_back(combo({{t, 3.0}, {t - 1, 10.0}, {t - 2, -18.0}, {t - 3, 6.0}, {t - 4, -1.0}}));
  out.push_back(combo({{t, 25.0}, {t - 1, -48.0}, {t - 2, 36.0}, {t - 3, -16.0}, {t - 4, 3.0}}));
  return out;
}

PathField path_velocity(const LoopPath& path) {
  return path_time_derivative(path.loops(), path.spacing());
}

PathField cov_deriv_along_path(const Connection& conn, const LoopPath& path, const PathField& field) {
  if (path.intervals() < 4) raise(ErrorKind::GridTooCoarse, "path grid needs T >= 4");
  if (field.size() != path.loops().size()) {
    raise(ErrorKind::BaseMismatch, "field and path have different lengths");
  }
  for (std::size_t i = 0; i < field.size(); ++i) {
    if (field[i].resolution() != path.resolution() || field[i].dim() != path.at(0).dim()) {
      raise(ErrorKind::BaseMismatch, "field loop shape does not match the path");
    }
  }
  const PathField velocity = path_velocity(path);
  const PathField field_dot = path_time_derivative(field, path.spacing());
  PathField out;
  out.reserve(field.size());
  for (std::size_t i = 0; i < field.size(); ++i) {
    Eigen::MatrixXd v(field[i].dim(), path.resolution());
    for (int j = 0; j < path.resolution(); ++j) {
      v.col(j) = conn.connector(path.loops()[i].node(j), field[i].node(j), velocity[i].node(j),
                                field_dot[i].node(j));
    }
    out.emplace_back(std::move(v));
  }
  return out;
}

LoopPath loop_geodesic(const Connection& conn, const TangentSection& nu, double time, int steps) {
  const EmbeddedManifold& m = conn.manifold();
  if (steps < 1) raise(ErrorKind::InvalidArgument, "steps must be positive");
  const int n = nu.resolution();
  const int d = nu.base().dim();
  std::vector<Eigen::MatrixXd> grids(static_cast<std::size_t>(steps) + 1, Eigen::MatrixXd(d, n));
  if (m.kind() == ManifoldKind::Flat) {
    // Straight lines (torsion is antisymmetric, so it does not bend geodesics).
    for (int i = 0; i <= steps; ++i) {
      const double s = time * i / steps;
      grids[static_cast<std::size_t>(i)] = nu.base().samples() + s * nu.vectors().samples();
    }
  } else {
    for (int j = 0; j < n; ++j) {
      const auto states = geodesic_trajectory(m, nu.at(j), time, steps);
      for (int i = 0; i <= steps; ++i) grids[static_cast<std::size_t>(i)].col(j) = states[static_cast<std::size_t>(i)].position;
    }
  }
  std::vector<SampledLoop> loops;
  loops.reserve(grids.size());
  for (auto& g : grids) loops.emplace_back(std::move(g));
  return LoopPath(m, std::move(loops), time);
}

namespace {

// V' = -T(c', V) / 2 along the piecewise-linear interpolation of the trace.
Eigen::VectorXd transport_with_torsion(const Connection& conn, std::span<const Point> trace,
                                       const Eigen::VectorXd& v) {
  Eigen::VectorXd w = v;
  for (std::size_t i = 1; i < trace.size(); ++i) {
    const Eigen::VectorXd step = trace[i] - trace[i - 1];
    auto rhs = [&](const Eigen::VectorXd& x) -> Eigen::VectorXd {
      return -0.5 * conn.torsion_at(trace[i - 1], step, x);
    };
    const Eigen::VectorXd k1 = rhs(w);
    const Eigen::VectorXd k2 = rhs(w + 0.5 * k1);
    const Eigen::VectorXd k3 = rhs(w + 0.5 * k2);
    const Eigen::VectorXd k4 = rhs(w + k3);
    w += (k1 + 2.0 * k2 + 2.0 * k3 + k4) / 6.0;
  }
  return w;
}

Eigen::VectorXd transport_along(const Connection& conn, std::span<const Point> trace, const Eigen::VectorXd& v) {
  if (conn.has_torsion()) return transport_with_torsion(conn, trace, v);
  return parallel_transport(conn.manifold(), trace, v);
}

}  // namespace

TangentSection loop_parallel_transport(const Connection& conn, const LoopPath& path, const TangentSection& sigma) {
  require_same_base(path.front(), sigma.base());
  const int n = path.resolution();
  Eigen::MatrixXd out(sigma.base().dim(), n);
  for (int j = 0; j < n; ++j) {
    const std::vector<Point> trace = path.node_trace(j);
    out.col(j) = transport_along(conn, trace, sigma.vectors().node(j));
  }
  return TangentSection::project(conn.manifold(), path.back(), SampledLoop(std::move(out)));
}

TangentSection torsion(const Connection& conn, const TangentSection& beta, const TangentSection& gamma) {
  require_same_base(beta.base(), gamma.base());
  const int n = beta.resolution();
  Eigen::MatrixXd out(beta.base().dim(), n);
  for (int j = 0; j < n; ++j) {
    out.col(j) = conn.torsion_at(beta.base().node(j), beta.vectors().node(j), gamma.vectors().node(j));
  }
  return {conn.manifold(), beta.base(), SampledLoop(std::move(out))};
}

TangentSection bundle_chart(const Connection& conn, const Chart& chart, const TangentSection& beta,
                            const TangentSection& gamma, int steps) {
  require_same_base(chart.center(), beta.base());
  require_same_base(chart.center(), gamma.base());
  if (steps < 1) raise(ErrorKind::InvalidArgument, "steps must be positive");
  const EmbeddedManifold& m = chart.manifold();
  const int n = beta.resolution();
  Eigen::MatrixXd base(m.ambient_dim(), n);
  Eigen::MatrixXd out(m.ambient_dim(), n);
  std::vector<Point> segment(static_cast<std::size_t>(steps) + 1);
  for (int j = 0; j < n; ++j) {
    const Point p = chart.center().node(j);
    const Eigen::VectorXd w = chart.addition().compress(beta.vectors().node(j));
    for (int i = 0; i <= steps; ++i) {
      segment[static_cast<std::size_t>(i)] = m.exp_closed(p, (static_cast<double>(i) / steps) * w);
    }
    base.col(j) = segment.back();
    out.col(j) = transport_along(conn, segment, gamma.vectors().node(j));
  }
  return TangentSection::project(m, SampledLoop(std::move(base)), SampledLoop(std::move(out)));
}

MatrixLoop frame_from_module_map(const SectionOperator& g, int n, int resolution, FrameOptions options) {
  if (n < 1 || !is_valid_resolution(resolution)) raise(ErrorKind::InvalidArgument, "bad frame shape");
  std::vector<SampledLoop> columns;
  columns.reserve(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    const SampledLoop image = g(SampledLoop::constant(Eigen::VectorXd::Unit(n, i), resolution));
    if (image.dim() != n || image.resolution() != resolution) {
      raise(ErrorKind::InvalidArgument, "operator changed the section shape");
    }
    columns.push_back(image);
  }
  std::vector<Eigen::MatrixXcd> mats(static_cast<std::size_t>(resolution), Eigen::MatrixXcd(n, n));
  for (int j = 0; j < resolution; ++j) {
    for (int i = 0; i < n; ++i) mats[static_cast<std::size_t>(j)].col(i) = columns[static_cast<std::size_t>(i)].node(j).cast<std::complex<double>>();
  }
  MatrixLoop frame(n, std::move(mats));

  std::mt19937_64 rng(options.seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  const int band = std::max(1, resolution / 8);
  for (int probe = 0; probe < options.probes; ++probe) {
    Eigen::MatrixXd cos_coeffs(n, band + 1), sin_coeffs(n, band + 1);
    for (int k = 0; k <= band; ++k) {
      for (int r = 0; r < n; ++r) {
        cos_coeffs(r, k) = normal(rng);
        sin_coeffs(r, k) = normal(rng);
      }
    }
    const SampledLoop f = SampledLoop::from_function(n, resolution, [&](double t) {
      Eigen::VectorXd v = Eigen::VectorXd::Zero(n);
      for (int k = 0; k <= band; ++k) {
        const double ph = 2.0 * std::numbers::pi * k * t;
        v += cos_coeffs.col(k) * std::cos(ph) + sin_coeffs.col(k) * std::sin(ph);
      }
      return v;
    });
    const SampledLoop expected = g(f);
    const SampledLoop rebuilt = apply_pointwise(frame, f);
    const double residual = sup_distance(expected, rebuilt) / std::max(1.0, sup_norm(expected));
    if (!(residual <= options.linearity_tol)) {
      raise(ErrorKind::NotPointwiseLinear,
            "operator is not L R-linear (reconstruction residual " + std::to_string(residual) + ")");
    }
  }
  if (!(frame.max_condition_number() < options.max_condition)) {
    raise(ErrorKind::SingularFrame, "extracted frame is singular at some node");
  }
  return frame;
}

NonsurjectivityReport exp_nonsurjectivity_witness(const EmbeddedManifold& sphere, const Point& base,
                                                  const SampledLoop& target) {
  if (sphere.kind() != ManifoldKind::Sphere) {
    raise(ErrorKind::InvalidArgument, "the witness is defined on the sphere");
  }
  sphere.require_on(base);
  const int n = target.resolution();
  Eigen::MatrixXd lift(3, n);
  for (int j = 0; j < n; ++j) lift.col(j) = log_map(sphere, base, target.node(j)).vector;
  Eigen::MatrixXd steps(3, n);
  for (int j = 0; j < n; ++j) steps.col(j) = lift.col((j + 1) % n) - lift.col(j);
  NonsurjectivityReport report;
  for (int j = 0; j < n; ++j) {
    const Eigen::Vector3d predicted = 0.5 * (steps.col((j + n - 1) % n) + steps.col((j + 1) % n));
    const double jump = (steps.col(j) - predicted).norm();
    if (jump > report.jump_magnitude) {
      report.jump_magnitude = jump;
      report.jump_index = j;
    }
    report.max_step = std::max(report.max_step, steps.col(j).norm());
  }
  return report;
}

SampledLoop great_circle(const Eigen::Vector3d& a, const Eigen::Vector3d& b, int n, double offset) {
  return SampledLoop::from_function(3, n, [&](double t) -> Eigen::VectorXd {
    const double ph = 2.0 * std::numbers::pi * (t + offset);
    return std::cos(ph) * a + std::sin(ph) * b;
  });
}

}  // namespace loopspace
