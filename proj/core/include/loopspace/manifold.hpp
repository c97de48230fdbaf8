#pragma once

#include <Eigen/Core>

#include <limits>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "loopspace/loop.hpp"

namespace loopspace {

enum class ManifoldKind { Flat, Sphere, Torus };

inline constexpr double kOnManifoldTol = 1e-8;
inline constexpr double kDivergenceTol = 1e-6;
inline constexpr int kDefaultOdeSteps = 200;

/// Flat R^n, the round S^2 in R^3, or the flat torus S^1 x S^1 in R^4.
/// A small value type: the kind tag selects the constraint, projector,
/// curvature term and the closed-form oracles.
class EmbeddedManifold {
 public:
  static EmbeddedManifold flat(int n);
  static EmbeddedManifold sphere2();
  static EmbeddedManifold torus2();
  /// "flat:<n>", "sphere2" or "torus2".
  static EmbeddedManifold from_tag(std::string_view tag);

  [[nodiscard]] ManifoldKind kind() const noexcept { return kind_; }
  [[nodiscard]] int ambient_dim() const noexcept { return ambient_; }
  [[nodiscard]] int intrinsic_dim() const noexcept { return intrinsic_; }
  [[nodiscard]] std::string tag() const;

  [[nodiscard]] double constraint_residual(const Point& p) const;
  [[nodiscard]] bool contains(const Point& p, double tol = kOnManifoldTol) const;
  /// Throws OffManifold when the residual exceeds kOnManifoldTol.
  void require_on(const Point& p) const;

  /// Orthogonal projector onto T_pM (ambient coordinates).
  [[nodiscard]] Eigen::MatrixXd tangent_projector(const Point& p) const;
  /// Orthonormal basis of T_pM as columns (ambient x intrinsic).
  [[nodiscard]] Eigen::MatrixXd tangent_basis(const Point& p) const;

  /// Acceleration of the geodesic through p with velocity v, i.e. the
  /// second-fundamental-form term x'' = -II(v, v).
  [[nodiscard]] Eigen::VectorXd geodesic_acceleration(const Point& p, const Eigen::VectorXd& v) const;

  /// Nearest point on M; throws OutsideTube beyond the projection's reach.
  [[nodiscard]] Point nearest_point(const Point& x) const;

  [[nodiscard]] double distance(const Point& p, const Point& q) const;
  [[nodiscard]] double injectivity_radius() const noexcept;

  // Closed-form oracles (all three kinds admit them).
  [[nodiscard]] Point exp_closed(const Point& p, const Eigen::VectorXd& v) const;
  [[nodiscard]] Eigen::VectorXd log_closed(const Point& p, const Point& q) const;
  /// Parallel transport along the geodesic t -> exp(t v), evaluated at t = 1.
  [[nodiscard]] Eigen::VectorXd transport_closed(const Point& p, const Eigen::VectorXd& v,
                                                 const Eigen::VectorXd& w) const;

  /// lambda_p(q) = P_p (q - p): orthogonal projection of q into T_pM.
  [[nodiscard]] Eigen::VectorXd projection_log(const Point& p, const Point& q) const;
  /// Inverse of lambda_p near p: the point q near p with lambda_p(q) = w.
  /// Throws OutsideAveragingDomain when w leaves the domain of the inverse.
  [[nodiscard]] Point projection_exp(const Point& p, const Eigen::VectorXd& w) const;

  friend bool operator==(const EmbeddedManifold&, const EmbeddedManifold&) = default;

 private:
  EmbeddedManifold(ManifoldKind kind, int ambient, int intrinsic)
      : kind_(kind), ambient_(ambient), intrinsic_(intrinsic) {}

  ManifoldKind kind_;
  int ambient_;
  int intrinsic_;
};

/// A vector in T_pM stored in the linear convention (v is in the subspace
/// T_pM of R^k, not anchored at p).
struct TangentAtPoint {
  Point base;
  Eigen::VectorXd vector;
};

TangentAtPoint project_tangent(const EmbeddedManifold& m, const Point& p, const Eigen::VectorXd& w);

/// One state of a geodesic: position and velocity.
struct GeodesicState {
  Point position;
  Eigen::VectorXd velocity;
};

/// RK4 on the ambient second-order geodesic equation with re-projection
/// onto M after every step.  Returns steps + 1 states on [0, time].
std::vector<GeodesicState> geodesic_trajectory(const EmbeddedManifold& m, const TangentAtPoint& v,
                                               double time, int steps);

Point exp_map(const EmbeddedManifold& m, const TangentAtPoint& v, int steps = kDefaultOdeSteps);

/// Closed-form logarithm.  Throws OutOfInjectivityDomain near the cut locus.
TangentAtPoint log_map(const EmbeddedManifold& m, const Point& p, const Point& q);

/// Newton shooting on the integrated exponential map.
TangentAtPoint log_map_shooting(const EmbeddedManifold& m, const Point& p, const Point& q,
                                int steps = kDefaultOdeSteps, int max_iterations = 30);

/// Levi-Civita transport of v along the discretised curve `path` (nodes on M).
Eigen::VectorXd parallel_transport(const EmbeddedManifold& m, std::span<const Point> path,
                                   const Eigen::VectorXd& v);

Point tubular_projection(const EmbeddedManifold& m, const Point& x);

/// Symmetric diffeomorphism R -> (-1, 1), phi(r) = g r / sqrt(1 + (g r)^2).
struct Compression {
  double gain = 1.0;

  [[nodiscard]] double operator()(double r) const;
  [[nodiscard]] double inverse(double s) const;
  [[nodiscard]] double derivative(double r) const;
};

/// eta(v) = exp_p(eps * phi(|v|) v / |v|), eta(p, 0) = p.
struct LocalAdditionSpec {
  EmbeddedManifold manifold;
  double epsilon;
  Compression compression{};

  /// eps = pi/2 on S^2 (inside the injectivity radius), 1 otherwise.
  static LocalAdditionSpec standard(const EmbeddedManifold& m);

  /// Radius r_V of the diagonal neighbourhood V in M x M.
  [[nodiscard]] double reach() const noexcept { return epsilon; }
  /// The fibre-compressed vector eps * phi(|v|) v / |v|.
  [[nodiscard]] Eigen::VectorXd compress(const Eigen::VectorXd& v) const;
  [[nodiscard]] Eigen::VectorXd decompress(const Eigen::VectorXd& w) const;
};

Point local_addition(const LocalAdditionSpec& spec, const TangentAtPoint& v);
/// Throws OutOfV when dist(p, q) is not below the compressed radius.
TangentAtPoint local_addition_inv(const LocalAdditionSpec& spec, const Point& p, const Point& q);

}  // namespace loopspace
