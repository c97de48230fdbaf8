#pragma once

#include <functional>

#include "loopspace/loop.hpp"
#include "loopspace/manifold.hpp"

namespace loopspace {

/// A section of alpha*TM: one ambient vector per node of the base loop,
/// each tangent to M at the corresponding base point.
class TangentSection {
 public:
  /// Validates shape and tangency (1e-10, scaled by the vector length).
  TangentSection(const EmbeddedManifold& m, SampledLoop base, SampledLoop vectors);

  static TangentSection zero(const EmbeddedManifold& m, SampledLoop base);
  /// Projects arbitrary ambient vectors onto the tangent spaces along `base`.
  static TangentSection project(const EmbeddedManifold& m, SampledLoop base, const SampledLoop& ambient);

  [[nodiscard]] const SampledLoop& base() const noexcept { return base_; }
  [[nodiscard]] const SampledLoop& vectors() const noexcept { return vectors_; }
  [[nodiscard]] int resolution() const noexcept { return base_.resolution(); }
  [[nodiscard]] TangentAtPoint at(int j) const { return {base_.node(j), vectors_.node(j)}; }

 private:
  SampledLoop base_;
  SampledLoop vectors_;
};

/// Throws BaseMismatch unless the two loops agree node for node.
void require_same_base(const SampledLoop& a, const SampledLoop& b);

/// The chart Psi_alpha of LM centred at alpha, built from a local addition.
class Chart {
 public:
  Chart(SampledLoop center, LocalAdditionSpec addition);

  [[nodiscard]] const SampledLoop& center() const noexcept { return center_; }
  [[nodiscard]] const LocalAdditionSpec& addition() const noexcept { return addition_; }
  [[nodiscard]] const EmbeddedManifold& manifold() const noexcept { return addition_.manifold; }

 private:
  SampledLoop center_;
  LocalAdditionSpec addition_;
};

/// Psi_alpha(beta)(t_j) = eta(beta_j).
SampledLoop chart_forward(const Chart& chart, const TangentSection& beta);

/// Whether gamma lies in U_alpha: dist(alpha_j, gamma_j) < r_V at every node.
bool chart_membership(const Chart& chart, const SampledLoop& gamma);

/// Throws NotInChartDomain outside U_alpha.
TangentSection chart_inverse(const Chart& chart, const SampledLoop& gamma);

/// Phi_12 = Psi_2^{-1} o Psi_1 on Psi_1^{-1}(U_1 n U_2); throws NotInOverlap.
TangentSection transition(const Chart& from, const Chart& to, const TangentSection& beta);

using PointMap = std::function<Point(const Point&)>;

/// f^L(gamma) = f o gamma.
SampledLoop loop_map(const PointMap& f, const SampledLoop& gamma);

/// iota(x) = (t -> x).
SampledLoop constant_loop(const Point& x, int n = kDefaultResolution);

/// e_t(gamma) = gamma(t).
Point evaluate_at(const SampledLoop& gamma, double t);

/// A smooth fibrewise map psi(t, v) on the trivial bundle S^1 x R^d.
using FiberMap = std::function<Point(double t, const Point& v)>;

/// psi^L(alpha)(t_j) = psi(t_j, alpha_j).
SampledLoop looped_fiber_map(const FiberMap& psi, const SampledLoop& alpha);

struct DifferenceOptions {
  double step = 1e-5;
  /// Combine steps h and h/2 to cancel the O(h^2) term.
  bool richardson = false;
};

/// Pointwise vertical derivative (d_v psi)(t_j, alpha_j) beta_j by central
/// differences.
SampledLoop vertical_derivative(const FiberMap& psi, const SampledLoop& alpha, const SampledLoop& beta,
                                DifferenceOptions options = {});

/// Derivative of the looped map s -> psi^L(alpha + s beta) at s = 0, taken
/// by central differences on whole loops.
SampledLoop looped_map_derivative(const FiberMap& psi, const SampledLoop& alpha, const SampledLoop& beta,
                                  DifferenceOptions options = {});

}  // namespace loopspace
