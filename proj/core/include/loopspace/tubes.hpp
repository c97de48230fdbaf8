#pragma once

#include <Eigen/Core>

#include <optional>
#include <vector>

#include "loopspace/charts.hpp"

namespace loopspace {

inline constexpr int kDefaultFlowSteps = 100;

/// Smooth rho: R -> [0, 1], rho = 1 on (-inf, 1], rho = 0 on [2, inf):
/// rho(t) = f(2 - t) / (f(2 - t) + f(t - 1)) with f(x) = exp(-1/x) for x > 0.
struct BumpProfile {
  [[nodiscard]] double operator()(double t) const noexcept;
};

/// psi_v = exp(X_v), the unit-time flow of X_v(u) = rho(|u|^2) v.
class FlowDiffeo {
 public:
  explicit FlowDiffeo(Eigen::VectorXd drive, int steps = kDefaultFlowSteps, BumpProfile bump = {});

  [[nodiscard]] const Eigen::VectorXd& drive() const noexcept { return drive_; }
  [[nodiscard]] int steps() const noexcept { return steps_; }
  /// The flow of the reversed field, psi_{-v}.
  [[nodiscard]] FlowDiffeo inverse() const { return FlowDiffeo(-drive_, steps_, bump_); }

  [[nodiscard]] Point operator()(const Point& u) const;

 private:
  Eigen::VectorXd drive_;
  int steps_;
  BumpProfile bump_;
};

Point flow_point(const FlowDiffeo& fd, const Point& u);

/// Integrates w' = rho(|w|^2) sigma for unit time (sigma constant), the
/// fibrewise flow used by every tube construction.
Eigen::VectorXd flow_in_fiber(const Eigen::VectorXd& w, const Eigen::VectorXd& sigma, int steps,
                              BumpProfile bump = {});

/// A chart phi: R^n -> U c M with phi(0) = x.  Stereographic projection
/// from the antipode on S^2 (and on each torus factor); translation on R^n.
class CenteredChart {
 public:
  CenteredChart(const EmbeddedManifold& m, Point center);

  [[nodiscard]] const EmbeddedManifold& manifold() const noexcept { return manifold_; }
  [[nodiscard]] const Point& center() const noexcept { return center_; }

  [[nodiscard]] Point from_coords(const Eigen::VectorXd& w) const;
  /// nullopt at points the chart omits (the antipode).
  [[nodiscard]] std::optional<Eigen::VectorXd> to_coords(const Point& y) const;
  /// d(phi) at w, ambient x intrinsic.
  [[nodiscard]] Eigen::MatrixXd jacobian(const Eigen::VectorXd& w) const;

 private:
  EmbeddedManifold manifold_;
  Point center_;
  Eigen::MatrixXd basis_;
};

/// phi_u = phi o psi_{phi^{-1}(u)} o phi^{-1}, extended by the identity.
Point move_point(const CenteredChart& chart, const Eigen::VectorXd& drive, const Point& y,
                 int steps = kDefaultFlowSteps);

struct BasedLoop {
  SampledLoop omega;  ///< loop based at the chart centre x
  Point start;        ///< u = gamma(0)
};

/// Local trivialisation of LM -> M over the chart patch: gamma -> (phi_u^{-1} gamma, u).
/// Throws OutsidePatch unless |phi^{-1}(gamma(0))| < 1.
BasedLoop based_trivialize(const CenteredChart& chart, const SampledLoop& gamma, int steps = kDefaultFlowSteps);
SampledLoop based_untrivialize(const CenteredChart& chart, const BasedLoop& based, int steps = kDefaultFlowSteps);

/// Cover of the base manifold with trivialisations of its tangent bundle
/// and weights whose squares sum to one.  S^2 uses the two stereographic
/// patches with rho_N^2 = (1 + z)/2 and rho_S^2 = (1 - z)/2; R^n and T^2 use
/// one global frame.
class SquaredPartition {
 public:
  static SquaredPartition standard(const EmbeddedManifold& m);

  [[nodiscard]] const EmbeddedManifold& manifold() const noexcept { return manifold_; }
  [[nodiscard]] int patches() const noexcept { return global_frame_ ? 1 : static_cast<int>(charts_.size()); }
  [[nodiscard]] double weight(int patch, const Point& x) const;
  /// Fibre coordinates tilde-phi_lambda(v) of v in T_xM; nullopt off the patch.
  [[nodiscard]] std::optional<Eigen::VectorXd> to_fiber(int patch, const Point& x, const Eigen::VectorXd& v) const;
  /// phi_lambda^{-1}(x, c).
  [[nodiscard]] std::optional<Eigen::VectorXd> from_fiber(int patch, const Point& x, const Eigen::VectorXd& c) const;

 private:
  explicit SquaredPartition(const EmbeddedManifold& m) : manifold_(m) {}

  EmbeddedManifold manifold_;
  std::vector<CenteredChart> charts_;
  bool global_frame_ = false;
};

/// s(v)(x) = sum_lambda rho_lambda(pi(v)) rho_lambda(x) phi_lambda^{-1}(x, tilde-phi_lambda(v)).
class PouSection {
 public:
  PouSection(SquaredPartition partition, TangentAtPoint v);
  [[nodiscard]] Eigen::VectorXd operator()(const Point& x) const;

 private:
  SquaredPartition partition_;
  TangentAtPoint v_;
};

PouSection pou_section(const SquaredPartition& partition, const TangentAtPoint& v);

/// A submanifold P of X (X = M for a point, X = M x M for the diagonal)
/// with its tube nu: E -> V and the partition used to spread a normal
/// vector into a global section.
class TubeGeometry {
 public:
  enum class Kind { Point, Diagonal };

  /// P = {x0}; E = R^n (chart coordinates), nu = the centred chart.
  static TubeGeometry point(const EmbeddedManifold& m, const Point& x0);
  /// P = diagonal of M x M; E = TM, nu(p, w) = (exp_p(-w), exp_p(w)).
  static TubeGeometry diagonal(const EmbeddedManifold& m);

  [[nodiscard]] Kind kind() const noexcept { return kind_; }
  [[nodiscard]] const EmbeddedManifold& manifold() const noexcept { return manifold_; }
  /// Ambient dimension of X.
  [[nodiscard]] int ambient_dim() const noexcept;

  /// Inclusion P -> X of a base point q (q in M for the diagonal).
  [[nodiscard]] Point embed(const Point& q) const;
  [[nodiscard]] Point nu(const Point& q, const Eigen::VectorXd& w) const;
  struct NormalCoords {
    Point base;
    Eigen::VectorXd vector;
  };
  /// nullopt outside V.
  [[nodiscard]] std::optional<NormalCoords> nu_inverse(const Point& y) const;
  /// Extracts q in P from a point of X that lies on P; nullopt otherwise.
  [[nodiscard]] std::optional<Point> base_of(const Point& y, double tol = 1e-8) const;
  /// s(v)(q) for v in E_{q0}.
  [[nodiscard]] Eigen::VectorXd spread(const Point& q0, const Eigen::VectorXd& v, const Point& q) const;

  /// theta(nu(v)) applied to a point y of X.
  [[nodiscard]] Point move(const Point& q0, const Eigen::VectorXd& v, const Point& y, int steps) const;

 private:
  TubeGeometry(Kind kind, const EmbeddedManifold& m, std::optional<CenteredChart> chart,
               std::optional<SquaredPartition> partition)
      : kind_(kind), manifold_(m), chart_(std::move(chart)), partition_(std::move(partition)) {}

  Kind kind_;
  EmbeddedManifold manifold_;
  std::optional<CenteredChart> chart_;
  std::optional<SquaredPartition> partition_;
};

/// (alpha, v) -> theta(nu(v))(alpha) for alpha(0) in P, |v| < 1.
SampledLoop tube_LP(const TubeGeometry& tube, const SampledLoop& alpha, const Eigen::VectorXd& v,
                    int steps = kDefaultFlowSteps);

struct TubeCoords {
  SampledLoop alpha;
  Point base;  ///< alpha(0) as a point of P
  Eigen::VectorXd vector;
};

TubeCoords tube_LP_inverse(const TubeGeometry& tube, const SampledLoop& zeta, int steps = kDefaultFlowSteps);

/// The subgroup C_m of S^1 (order m >= 1) or S^1 itself (order 0).
struct CircleSubgroup {
  int order = 0;

  static CircleSubgroup full() { return {0}; }
  static CircleSubgroup cyclic(int m) { return {m}; }
  [[nodiscard]] bool is_full() const noexcept { return order == 0; }
  /// Node offsets making up one coset at resolution n.
  [[nodiscard]] std::vector<int> coset_offsets(int n) const;
};

/// A map G -> M: one value per group element (or per node for S^1).
struct FinitePointMap {
  CircleSubgroup group;
  std::vector<Point> values;
};

/// tau(beta) = tubular projection of the group mean of beta.
/// Throws OutsideTube when the mean is beyond the projection's reach.
Point local_average(const EmbeddedManifold& m, const FinitePointMap& beta);

struct EquivariantSplit {
  SampledLoop fixed;       ///< G-invariant loop (period 1/m; constant for S^1)
  TangentSection normal;   ///< lambda(fixed, gamma) node-wise, zero coset mean
};

/// Throws OutsideAveragingDomain when a coset leaves Y_G.
EquivariantSplit equivariant_decompose(const EmbeddedManifold& m, CircleSubgroup group, const SampledLoop& gamma);
SampledLoop equivariant_recompose(const EmbeddedManifold& m, const EquivariantSplit& split);

/// Fibre compression of the normal data, coset by coset:
/// alpha -> eps phi(|alpha|_inf) / |alpha|_inf * alpha.
SampledLoop compress_normal(CircleSubgroup group, const SampledLoop& normal, double epsilon,
                            Compression phi = {});
SampledLoop decompress_normal(CircleSubgroup group, const SampledLoop& normal, double epsilon,
                              Compression phi = {});

/// Compression radius used by the equivariant tube on M.
double equivariant_epsilon(const EmbeddedManifold& m);

/// Normal bundle -> tube: (fixed, nu) -> recompose(fixed, compress(nu)).
SampledLoop equivariant_tube(const EmbeddedManifold& m, CircleSubgroup group, const TangentSection& normal);
/// Tube -> normal bundle.
EquivariantSplit equivariant_tube_inverse(const EmbeddedManifold& m, CircleSubgroup group, const SampledLoop& gamma);

}  // namespace loopspace
