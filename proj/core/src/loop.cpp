#include "loopspace/loop.hpp"

#include <unsupported/Eigen/FFT>

#include <cmath>
#include <numbers>
#include <vector>

#include "loopspace/error.hpp"

namespace loopspace {
namespace {

using cd = std::complex<double>;

void require_same_shape(const SampledLoop& a, const SampledLoop& b) {
  if (a.dim() != b.dim() || a.resolution() != b.resolution()) {
    raise(ErrorKind::InvalidArgument, "loop shapes differ");
  }
}

// Fourier multiplier applied mode by mode; the Nyquist mode gets a separate
// real factor because it is carried as a cosine.
template <class Mult>
SampledLoop apply_multiplier(const SampledLoop& loop, Mult&& mult, double nyquist_factor) {
  FourierRep rep = to_fourier(loop);
  const int n = rep.resolution;
  for (int b = 0; b < n; ++b) {
    const int k = FourierRep::mode_of_bin(b, n);
    if (k == n / 2) {
      rep.coeffs.col(b) *= nyquist_factor;
    } else {
      rep.coeffs.col(b) *= mult(k);
    }
  }
  return to_samples(rep);
}

}  // namespace

bool is_valid_resolution(int n) noexcept { return n >= 8 && (n & (n - 1)) == 0; }

double reduce_circle(double t) noexcept {
  double r = t - std::floor(t);
  return r >= 1.0 ? 0.0 : r;
}

SampledLoop::SampledLoop(Eigen::MatrixXd samples) : samples_(std::move(samples)) {
  if (samples_.rows() < 1) raise(ErrorKind::InvalidArgument, "loop dimension must be positive");
  if (!is_valid_resolution(static_cast<int>(samples_.cols()))) {
    raise(ErrorKind::InvalidArgument,
          "resolution must be a power of two >= 8, got " + std::to_string(samples_.cols()));
  }
  if (!samples_.allFinite()) raise(ErrorKind::InvalidArgument, "loop samples must be finite");
}

SampledLoop SampledLoop::constant(const Point& p, int n) {
  if (!is_valid_resolution(n)) raise(ErrorKind::InvalidArgument, "invalid resolution");
  return SampledLoop(p.replicate(1, n));
}

SampledLoop SampledLoop::zero(int dim, int n) {
  return SampledLoop(Eigen::MatrixXd::Zero(dim, n));
}

Point SampledLoop::node(int j) const {
  const int n = resolution();
  return samples_.col(((j % n) + n) % n);
}

SampledLoop& SampledLoop::operator+=(const SampledLoop& other) {
  require_same_shape(*this, other);
  samples_ += other.samples_;
  return *this;
}

SampledLoop& SampledLoop::operator-=(const SampledLoop& other) {
  require_same_shape(*this, other);
  samples_ -= other.samples_;
  return *this;
}

SampledLoop& SampledLoop::operator*=(double a) {
  samples_ *= a;
  return *this;
}

SampledLoop operator+(SampledLoop a, const SampledLoop& b) { return a += b; }
SampledLoop operator-(SampledLoop a, const SampledLoop& b) { return a -= b; }
SampledLoop operator*(double a, SampledLoop b) { return b *= a; }
SampledLoop operator-(SampledLoop a) { return a *= -1.0; }

SampledLoop pointwise_scale(const SampledLoop& scalar, const SampledLoop& loop) {
  if (scalar.dim() != 1 || scalar.resolution() != loop.resolution()) {
    raise(ErrorKind::InvalidArgument, "pointwise_scale needs a scalar loop of equal resolution");
  }
  Eigen::MatrixXd out = loop.samples();
  for (int j = 0; j < loop.resolution(); ++j) out.col(j) *= scalar.samples()(0, j);
  return SampledLoop(std::move(out));
}

double sup_distance(const SampledLoop& a, const SampledLoop& b) {
  require_same_shape(a, b);
  return (a.samples() - b.samples()).colwise().norm().maxCoeff();
}

double sup_norm(const SampledLoop& a) { return a.samples().colwise().norm().maxCoeff(); }

Eigen::VectorXcd FourierRep::mode(int k) const {
  if (k <= -resolution / 2 || k > resolution / 2) {
    raise(ErrorKind::InvalidArgument, "mode out of range");
  }
  return coeffs.col(bin_of_mode(k, resolution));
}

FourierRep to_fourier(const Eigen::MatrixXcd& samples) {
  const int d = static_cast<int>(samples.rows());
  const int n = static_cast<int>(samples.cols());
  if (!is_valid_resolution(n)) raise(ErrorKind::InvalidArgument, "invalid resolution");
  FourierRep rep{d, n, Eigen::MatrixXcd(d, n)};
  Eigen::FFT<double> fft;
  std::vector<cd> in(n), out(n);
  for (int r = 0; r < d; ++r) {
    for (int j = 0; j < n; ++j) in[j] = samples(r, j);
    fft.fwd(out, in);
    for (int b = 0; b < n; ++b) rep.coeffs(r, b) = out[b] / static_cast<double>(n);
  }
  return rep;
}

FourierRep to_fourier(const SampledLoop& loop) {
  return to_fourier(Eigen::MatrixXcd(loop.samples().cast<cd>()));
}

Eigen::MatrixXcd to_complex_samples(const FourierRep& rep) {
  Eigen::MatrixXcd s(rep.dim, rep.resolution);
  Eigen::FFT<double> fft;
  std::vector<cd> in(rep.resolution), out(rep.resolution);
  for (int r = 0; r < rep.dim; ++r) {
    for (int b = 0; b < rep.resolution; ++b) in[b] = rep.coeffs(r, b);
    fft.inv(out, in);
    for (int j = 0; j < rep.resolution; ++j) s(r, j) = out[j] * static_cast<double>(rep.resolution);
  }
  return s;
}

SampledLoop to_samples(const FourierRep& rep) {
  return SampledLoop(to_complex_samples(rep).real());
}

Interpolant::Interpolant(const SampledLoop& loop) : rep_(to_fourier(loop)) {}

Point Interpolant::operator()(double t) const {
  const int n = rep_.resolution;
  const double tr = reduce_circle(t);
  Eigen::VectorXcd acc = Eigen::VectorXcd::Zero(rep_.dim);
  for (int b = 0; b < n; ++b) {
    const int k = FourierRep::mode_of_bin(b, n);
    if (k == n / 2) {
      acc += rep_.coeffs.col(b) * std::cos(std::numbers::pi * n * tr);
    } else {
      const double phase = 2.0 * std::numbers::pi * k * tr;
      acc += rep_.coeffs.col(b) * cd(std::cos(phase), std::sin(phase));
    }
  }
  return acc.real();
}

Point eval(const SampledLoop& loop, double t) {
  const int n = loop.resolution();
  const double tr = reduce_circle(t);
  const double scaled = tr * n;
  const double nearest = std::round(scaled);
  if (scaled == nearest) return loop.node(static_cast<int>(nearest));
  return Interpolant(loop)(tr);
}

SampledLoop derivative(const SampledLoop& loop, int order) {
  if (order < 1 || order > kMaxDerivativeOrder) {
    raise(ErrorKind::InvalidArgument, "derivative order must be in [1, 4]");
  }
  const int n = loop.resolution();
  const double nyq = std::numbers::pi * n;
  const double nyquist_factor = (order % 2 == 1) ? 0.0 : ((order / 2) % 2 == 1 ? -1.0 : 1.0) * std::pow(nyq, order);
  return apply_multiplier(
      loop,
      [order](int k) {
        return std::pow(cd(0.0, 2.0 * std::numbers::pi * k), order);
      },
      nyquist_factor);
}

double ck_seminorm(const SampledLoop& loop, int k) {
  if (k < 0 || k > kMaxDerivativeOrder) raise(ErrorKind::InvalidArgument, "seminorm order must be in [0, 4]");
  return k == 0 ? sup_norm(loop) : sup_norm(derivative(loop, k));
}

SampledLoop rotate(const SampledLoop& loop, double s) {
  const int n = loop.resolution();
  const double sr = reduce_circle(s);
  const double shift = sr * n;
  const double nearest = std::round(shift);
  if (std::abs(shift - nearest) <= 1e-9 * n) {
    const int m = static_cast<int>(nearest) % n;
    Eigen::MatrixXd out(loop.dim(), n);
    for (int j = 0; j < n; ++j) out.col(j) = loop.samples().col((j + m) % n);
    return SampledLoop(std::move(out));
  }
  return apply_multiplier(
      loop,
      [sr](int k) {
        const double phase = 2.0 * std::numbers::pi * k * sr;
        return cd(std::cos(phase), std::sin(phase));
      },
      std::cos(std::numbers::pi * n * sr));
}

}  // namespace loopspace
