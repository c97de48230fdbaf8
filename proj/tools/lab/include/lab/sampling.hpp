#pragma once

#include <Eigen/Core>

#include <cstdint>
#include <random>
#include <string_view>
#include <vector>

#include "loopspace/charts.hpp"
#include "loopspace/loop.hpp"
#include "loopspace/manifold.hpp"

namespace loopspace::lab {

/// A real trigonometric polynomial c0 + sum_k a_k cos(2 pi k t) + b_k sin(2 pi k t)
/// with vector coefficients and a closed-form derivative.
struct TrigSeries {
  Eigen::VectorXd mean;
  std::vector<Eigen::VectorXd> cos_coeffs;
  std::vector<Eigen::VectorXd> sin_coeffs;

  [[nodiscard]] Eigen::VectorXd operator()(double t) const;
  [[nodiscard]] Eigen::VectorXd derivative(double t) const;
  [[nodiscard]] SampledLoop sample(int n) const;
};

/// Seeded source of random test data.  Each suite draws from its own stream
/// so adding checks to one suite never perturbs another.
class Sampler {
 public:
  Sampler(std::uint64_t seed, std::string_view stream);

  double normal();
  double uniform(double a, double b);
  int integer(int a, int b);
  Eigen::VectorXd normal_vector(int d);
  Eigen::Vector3d unit3();

  /// Coefficients of mode k scaled by amplitude / k^2.
  TrigSeries trig_series(int dim, int band, double amplitude);
  Point random_point(const EmbeddedManifold& m);
  SampledLoop random_loop(const EmbeddedManifold& m, int n, double spread = 0.4);
  /// A loop close to x: ambient perturbation (angles on the torus) of the given size.
  SampledLoop loop_near(const EmbeddedManifold& m, const Point& x, int n, double size);
  /// Tangent section along base with the given sup norm.
  TangentSection random_section(const EmbeddedManifold& m, const SampledLoop& base, double sup);
  Eigen::VectorXd random_tangent(const EmbeddedManifold& m, const Point& p, double length);

 private:
  std::mt19937_64 engine_;
  std::normal_distribution<double> normal_{0.0, 1.0};
};

}  // namespace loopspace::lab
