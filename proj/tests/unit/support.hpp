#pragma once

#include <Eigen/Core>
#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "loopspace/charts.hpp"
#include "loopspace/loop.hpp"
#include "loopspace/manifold.hpp"

namespace testing_support {

using loopspace::EmbeddedManifold;
using loopspace::SampledLoop;
using loopspace::TangentSection;

inline constexpr double kTwoPi = 2.0 * std::numbers::pi;

class Rand {
 public:
  explicit Rand(unsigned long long seed) : engine_(seed) {}
  double normal() { return normal_(engine_); }
  double uniform(double a, double b) { return std::uniform_real_distribution<double>(a, b)(engine_); }
  int integer(int a, int b) { return std::uniform_int_distribution<int>(a, b)(engine_); }
  Eigen::VectorXd normal_vector(int d) {
    Eigen::VectorXd v(d);
    for (int i = 0; i < d; ++i) v(i) = normal();
    return v;
  }
  Eigen::Vector3d unit3() { return normal_vector(3).normalized(); }

 private:
  std::mt19937_64 engine_;
  std::normal_distribution<double> normal_{0.0, 1.0};
};

/// Random trigonometric polynomial of the given bandwidth, with its
/// coefficients so callers can evaluate it in closed form.
struct TrigPoly {
  Eigen::VectorXd mean;
  std::vector<Eigen::VectorXd> cos_c, sin_c;

  static TrigPoly random(Rand& r, int dim, int band, double amplitude) {
    TrigPoly p{amplitude * r.normal_vector(dim), {}, {}};
    for (int k = 1; k <= band; ++k) {
      p.cos_c.push_back(amplitude / (k * k) * r.normal_vector(dim));
      p.sin_c.push_back(amplitude / (k * k) * r.normal_vector(dim));
    }
    return p;
  }
  [[nodiscard]] Eigen::VectorXd operator()(double t) const {
    Eigen::VectorXd v = mean;
    for (std::size_t i = 0; i < cos_c.size(); ++i) {
      const double a = kTwoPi * static_cast<double>(i + 1) * t;
      v += std::cos(a) * cos_c[i] + std::sin(a) * sin_c[i];
    }
    return v;
  }
  [[nodiscard]] Eigen::VectorXd derivative(double t) const {
    Eigen::VectorXd v = Eigen::VectorXd::Zero(mean.size());
    for (std::size_t i = 0; i < cos_c.size(); ++i) {
      const double w = kTwoPi * static_cast<double>(i + 1);
      v += w * (-std::sin(w * t) * cos_c[i] + std::cos(w * t) * sin_c[i]);
    }
    return v;
  }
  [[nodiscard]] SampledLoop sample(int n) const {
    return SampledLoop::from_function(static_cast<int>(mean.size()), n, [&](double t) { return (*this)(t); });
  }
};

/// A random smooth loop on m.
inline SampledLoop random_loop(const EmbeddedManifold& m, Rand& r, int n, double spread = 0.4) {
  switch (m.kind()) {
    case loopspace::ManifoldKind::Flat: return TrigPoly::random(r, m.ambient_dim(), 3, 1.0).sample(n);
    case loopspace::ManifoldKind::Sphere: {
      const Eigen::Vector3d c = r.unit3();
      TrigPoly p = TrigPoly::random(r, 3, 3, spread);
      p.mean = c;
      return SampledLoop::from_function(3, n, [&](double t) { return Eigen::VectorXd(p(t).normalized()); });
    }
    case loopspace::ManifoldKind::Torus: {
      const TrigPoly p = TrigPoly::random(r, 2, 3, 1.0);
      const int w1 = r.integer(-1, 1), w2 = r.integer(-1, 1);
      return SampledLoop::from_function(4, n, [&](double t) {
        const Eigen::VectorXd a = p(t);
        const double x = a(0) + kTwoPi * w1 * t, y = a(1) + kTwoPi * w2 * t;
        Eigen::VectorXd q(4);
        q << std::cos(x), std::sin(x), std::cos(y), std::sin(y);
        return q;
      });
    }
  }
  return SampledLoop::zero(m.ambient_dim(), n);
}

/// A random smooth section along `base` whose sup norm equals `sup`.
inline TangentSection random_section(const EmbeddedManifold& m, const SampledLoop& base, Rand& r, double sup) {
  const SampledLoop ambient = TrigPoly::random(r, m.ambient_dim(), 3, 1.0).sample(base.resolution());
  TangentSection s = TangentSection::project(m, base, ambient);
  const double norm = loopspace::sup_norm(s.vectors());
  return TangentSection(m, base, (sup / norm) * s.vectors());
}

inline double max_abs(const Eigen::MatrixXd& a) { return a.size() == 0 ? 0.0 : a.cwiseAbs().maxCoeff(); }

}  // namespace testing_support
