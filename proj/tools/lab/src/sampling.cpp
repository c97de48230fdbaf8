#include "lab/sampling.hpp"

#include <cmath>
#include <numbers>

namespace loopspace::lab {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

std::uint64_t stream_hash(std::string_view s) {
  std::uint64_t h = 1469598103934665603ULL;  // FNV-1a
  for (char c : s) {
    h ^= static_cast<unsigned char>(c);
    h *= 1099511628211ULL;
  }
  return h;
}

}  // namespace

Eigen::VectorXd TrigSeries::operator()(double t) const {
  Eigen::VectorXd v = mean;
  for (std::size_t i = 0; i < cos_coeffs.size(); ++i) {
    const double a = kTwoPi * static_cast<double>(i + 1) * t;
    v += std::cos(a) * cos_coeffs[i] + std::sin(a) * sin_coeffs[i];
  }
  return v;
}

Eigen::VectorXd TrigSeries::derivative(double t) const {
  Eigen::VectorXd v = Eigen::VectorXd::Zero(mean.size());
  for (std::size_t i = 0; i < cos_coeffs.size(); ++i) {
    const double w = kTwoPi * static_cast<double>(i + 1);
    v += w * (std::cos(w * t) * sin_coeffs[i] - std::sin(w * t) * cos_coeffs[i]);
  }
  return v;
}

SampledLoop TrigSeries::sample(int n) const {
  return SampledLoop::from_function(static_cast<int>(mean.size()), n, [&](double t) { return (*this)(t); });
}

Sampler::Sampler(std::uint64_t seed, std::string_view stream) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(stream_hash(stream)),
                    static_cast<std::uint32_t>(stream_hash(stream) >> 32)};
  engine_.seed(seq);
}

double Sampler::normal() { return normal_(engine_); }
double Sampler::uniform(double a, double b) { return std::uniform_real_distribution<double>(a, b)(engine_); }
int Sampler::integer(int a, int b) { return std::uniform_int_distribution<int>(a, b)(engine_); }

Eigen::VectorXd Sampler::normal_vector(int d) {
  Eigen::VectorXd v(d);
  for (int i = 0; i < d; ++i) v(i) = normal();
  return v;
}

Eigen::Vector3d Sampler::unit3() { return normal_vector(3).normalized(); }

TrigSeries Sampler::trig_series(int dim, int band, double amplitude) {
  TrigSeries s{amplitude * normal_vector(dim), {}, {}};
  for (int k = 1; k <= band; ++k) {
    s.cos_coeffs.push_back(amplitude / (k * k) * normal_vector(dim));
    s.sin_coeffs.push_back(amplitude / (k * k) * normal_vector(dim));
  }
  return s;
}

Point Sampler::random_point(const EmbeddedManifold& m) {
  switch (m.kind()) {
    case ManifoldKind::Sphere: return unit3();
    case ManifoldKind::Torus: {
      const double a = uniform(0.0, kTwoPi), b = uniform(0.0, kTwoPi);
      Point p(4);
      p << std::cos(a), std::sin(a), std::cos(b), std::sin(b);
      return p;
    }
    case ManifoldKind::Flat: break;
  }
  return normal_vector(m.ambient_dim());
}

SampledLoop Sampler::random_loop(const EmbeddedManifold& m, int n, double spread) {
  switch (m.kind()) {
    case ManifoldKind::Sphere: {
      TrigSeries p = trig_series(3, 3, spread);
      p.mean = unit3();
      return SampledLoop::from_function(3, n, [&](double t) { return Eigen::VectorXd(p(t).normalized()); });
    }
    case ManifoldKind::Torus: {
      const TrigSeries p = trig_series(2, 3, 1.0);
      const int w1 = integer(-1, 1), w2 = integer(-1, 1);
      return SampledLoop::from_function(4, n, [&](double t) {
        const Eigen::VectorXd a = p(t);
        const double x = a(0) + kTwoPi * w1 * t, y = a(1) + kTwoPi * w2 * t;
        Eigen::VectorXd q(4);
        q << std::cos(x), std::sin(x), std::cos(y), std::sin(y);
        return q;
      });
    }
    case ManifoldKind::Flat: break;
  }
  return trig_series(m.ambient_dim(), 3, 1.0).sample(n);
}

SampledLoop Sampler::loop_near(const EmbeddedManifold& m, const Point& x, int n, double size) {
  if (m.kind() == ManifoldKind::Torus) {
    const TrigSeries p = trig_series(2, 3, size);
    const double a0 = std::atan2(x(1), x(0)), b0 = std::atan2(x(3), x(2));
    return SampledLoop::from_function(4, n, [&](double t) {
      const Eigen::VectorXd d = p(t);
      Eigen::VectorXd q(4);
      q << std::cos(a0 + d(0)), std::sin(a0 + d(0)), std::cos(b0 + d(1)), std::sin(b0 + d(1));
      return q;
    });
  }
  const TrigSeries p = trig_series(m.ambient_dim(), 3, size);
  return SampledLoop::from_function(m.ambient_dim(), n, [&](double t) { return tubular_projection(m, x + p(t)); });
}

TangentSection Sampler::random_section(const EmbeddedManifold& m, const SampledLoop& base, double sup) {
  const SampledLoop ambient = trig_series(m.ambient_dim(), 3, 1.0).sample(base.resolution());
  const TangentSection s = TangentSection::project(m, base, ambient);
  const double norm = sup_norm(s.vectors());
  return TangentSection(m, base, (sup / norm) * s.vectors());
}

Eigen::VectorXd Sampler::random_tangent(const EmbeddedManifold& m, const Point& p, double length) {
  const Eigen::VectorXd w = m.tangent_projector(p) * normal_vector(m.ambient_dim());
  return length * w.normalized();
}

}  // namespace loopspace::lab
