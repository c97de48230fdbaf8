#pragma once

#include <Eigen/Core>

#include <functional>
#include <optional>
#include <vector>

#include "loopspace/charts.hpp"
#include "loopspace/matrix_loop.hpp"

namespace loopspace {

/// A path [0, duration] -> LM stored through its adjoint: loops()[i] is the
/// loop at path time s_i = i * duration / T on a uniform grid.
class LoopPath {
 public:
  LoopPath(const EmbeddedManifold& m, std::vector<SampledLoop> loops, double duration = 1.0);

  [[nodiscard]] const std::vector<SampledLoop>& loops() const noexcept { return loops_; }
  [[nodiscard]] const SampledLoop& at(int i) const { return loops_.at(static_cast<std::size_t>(i)); }
  [[nodiscard]] int intervals() const noexcept { return static_cast<int>(loops_.size()) - 1; }
  [[nodiscard]] double duration() const noexcept { return duration_; }
  [[nodiscard]] double spacing() const noexcept { return duration_ / intervals(); }
  [[nodiscard]] int resolution() const noexcept { return loops_.front().resolution(); }
  [[nodiscard]] const SampledLoop& front() const { return loops_.front(); }
  [[nodiscard]] const SampledLoop& back() const { return loops_.back(); }
  /// The trace s -> path(s)(t_j).
  [[nodiscard]] std::vector<Point> node_trace(int j) const;

 private:
  std::vector<SampledLoop> loops_;
  double duration_;
};

/// A vector field along a LoopPath: vectors[i] is based at path.at(i).
using PathField = std::vector<SampledLoop>;

/// Antisymmetric bilinear map T(u, v) on R^n.
using TorsionTensor = std::function<Eigen::VectorXd(const Eigen::VectorXd&, const Eigen::VectorXd&)>;

/// A connection on TM given by its connector K: for a curve (p(s), V(s))
/// in TM, K(p, V, p', V') is the covariant derivative of V along p.
class Connection {
 public:
  /// Levi-Civita connection of the embedded metric: K = P_p(V').
  static Connection levi_civita(const EmbeddedManifold& m);
  /// Flat R^n with K = V' + T(p', V) / 2, whose torsion is T.
  static Connection flat_with_torsion(int n, TorsionTensor torsion);

  [[nodiscard]] const EmbeddedManifold& manifold() const noexcept { return manifold_; }
  [[nodiscard]] bool has_torsion() const noexcept { return static_cast<bool>(torsion_); }

  [[nodiscard]] Eigen::VectorXd connector(const Point& p, const Eigen::VectorXd& value,
                                          const Eigen::VectorXd& base_velocity,
                                          const Eigen::VectorXd& value_velocity) const;
  /// Pointwise torsion tensor; zero for the Levi-Civita connection.
  [[nodiscard]] Eigen::VectorXd torsion_at(const Point& p, const Eigen::VectorXd& u,
                                           const Eigen::VectorXd& v) const;

 private:
  Connection(EmbeddedManifold m, TorsionTensor torsion) : manifold_(m), torsion_(std::move(torsion)) {}

  EmbeddedManifold manifold_;
  TorsionTensor torsion_;
};

/// <beta, gamma>_alpha = int <beta(t), gamma(t)> dt by the trapezoid rule.
double l2_inner(const TangentSection& beta, const TangentSection& gamma);

/// Path-time derivative of a field along a path of length T + 1 by
/// fourth-order central differences (one-sided at the ends).  T >= 4.
PathField path_time_derivative(const PathField& field, double spacing);
/// d/ds of the path itself.
PathField path_velocity(const LoopPath& path);

/// (nabla_{d/ds} s)^v = nabla_{d/ds}(s^v): the pointwise connector applied
/// to the path-time derivative of the adjoint.  Throws GridTooCoarse if T < 4.
PathField cov_deriv_along_path(const Connection& conn, const LoopPath& path, const PathField& field);

/// Geodesic in LM with initial data (alpha, nu), sampled at steps + 1
/// path times on [0, time].
LoopPath loop_geodesic(const Connection& conn, const TangentSection& nu, double time = 1.0,
                       int steps = kDefaultOdeSteps);

/// Node-wise parallel transport of sigma along the path.
TangentSection loop_parallel_transport(const Connection& conn, const LoopPath& path,
                                       const TangentSection& sigma);

/// Pointwise torsion T(beta_j, gamma_j).
TangentSection torsion(const Connection& conn, const TangentSection& beta, const TangentSection& gamma);

/// Theta_alpha(beta, gamma): gamma_j transported along u -> exp(u compress(beta_j)),
/// based at Psi_alpha(beta).
TangentSection bundle_chart(const Connection& conn, const Chart& chart, const TangentSection& beta,
                            const TangentSection& gamma, int steps = 32);

/// An operator on sections of the trivial bundle S^1 x R^n.
using SectionOperator = std::function<SampledLoop(const SampledLoop&)>;

struct FrameOptions {
  int probes = 100;
  unsigned seed = 1;
  double linearity_tol = 1e-6;
  double max_condition = 1e8;
};

/// Recovers gamma in L gl_n from an L R-module map g by applying g to the
/// constant basis sections; verifies the reconstruction on random sections.
/// Throws NotPointwiseLinear or SingularFrame.
MatrixLoop frame_from_module_map(const SectionOperator& g, int n, int resolution, FrameOptions options = {});

struct NonsurjectivityReport {
  /// Largest per-step discontinuity of the node-wise log lift, measured as
  /// the step that the neighbouring steps do not explain.
  double jump_magnitude = 0.0;
  /// Largest raw step |lift_{j+1} - lift_j|.
  double max_step = 0.0;
  int jump_index = 0;
};

/// Lifts `target` node-wise through log at `base` and measures how far the
/// lift is from continuous.
NonsurjectivityReport exp_nonsurjectivity_witness(const EmbeddedManifold& sphere, const Point& base,
                                                  const SampledLoop& target);

/// Great circle t -> cos(2 pi (t + offset)) a + sin(2 pi (t + offset)) b
/// for orthonormal a, b in R^3.
SampledLoop great_circle(const Eigen::Vector3d& a, const Eigen::Vector3d& b, int n, double offset = 0.0);

}  // namespace loopspace
