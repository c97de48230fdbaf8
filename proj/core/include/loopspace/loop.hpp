#pragma once

// Discrete smooth loops S^1 -> R^d.  S^1 is R/Z, node j sits at t_j = j/N
// and every loop is read through its band-limited trigonometric interpolant.

#include <Eigen/Core>

#include <complex>
#include <utility>

namespace loopspace {

using Point = Eigen::VectorXd;

inline constexpr int kDefaultResolution = 128;
inline constexpr int kMaxDerivativeOrder = 4;

/// N must be a power of two and at least 8.
[[nodiscard]] bool is_valid_resolution(int n) noexcept;

/// Reduces t into [0, 1).
[[nodiscard]] double reduce_circle(double t) noexcept;

class SampledLoop {
 public:
  /// `samples` is dim x N; column j is the value at t_j = j / N.
  explicit SampledLoop(Eigen::MatrixXd samples);

  static SampledLoop constant(const Point& p, int n);
  static SampledLoop zero(int dim, int n);

  template <class F>
  static SampledLoop from_function(int dim, int n, F&& f) {
    Eigen::MatrixXd s(dim, n);
    for (int j = 0; j < n; ++j) s.col(j) = f(node_time(j, n));
    return SampledLoop(std::move(s));
  }

  [[nodiscard]] int dim() const noexcept { return static_cast<int>(samples_.rows()); }
  [[nodiscard]] int resolution() const noexcept { return static_cast<int>(samples_.cols()); }
  [[nodiscard]] const Eigen::MatrixXd& samples() const noexcept { return samples_; }

  /// Node value; j is taken modulo N.
  [[nodiscard]] Point node(int j) const;
  [[nodiscard]] double time(int j) const noexcept { return node_time(j, resolution()); }
  [[nodiscard]] static double node_time(int j, int n) noexcept {
    return static_cast<double>(j) / static_cast<double>(n);
  }

  SampledLoop& operator+=(const SampledLoop& other);
  SampledLoop& operator-=(const SampledLoop& other);
  SampledLoop& operator*=(double a);

  friend bool operator==(const SampledLoop& a, const SampledLoop& b) {
    return a.samples_.rows() == b.samples_.rows() && a.samples_.cols() == b.samples_.cols() &&
           a.samples_ == b.samples_;
  }

 private:
  Eigen::MatrixXd samples_;
};

SampledLoop operator+(SampledLoop a, const SampledLoop& b);
SampledLoop operator-(SampledLoop a, const SampledLoop& b);
SampledLoop operator*(double a, SampledLoop b);
SampledLoop operator-(SampledLoop a);

/// Action of the scalar loop ring L R: (nu . beta)(t) = nu(t) beta(t).
SampledLoop pointwise_scale(const SampledLoop& scalar, const SampledLoop& loop);

/// max_j |a(t_j) - b(t_j)|.
double sup_distance(const SampledLoop& a, const SampledLoop& b);
double sup_norm(const SampledLoop& a);

/// Fourier coefficients c_k, -N/2 < k <= N/2, normalised so that
/// x(t_j) = sum_k c_k exp(2 pi i k t_j).  Column b holds mode k with b = k mod N.
struct FourierRep {
  int dim = 0;
  int resolution = 0;
  Eigen::MatrixXcd coeffs;

  [[nodiscard]] static int bin_of_mode(int k, int n) noexcept { return ((k % n) + n) % n; }
  [[nodiscard]] static int mode_of_bin(int b, int n) noexcept { return b <= n / 2 ? b : b - n; }
  [[nodiscard]] Eigen::VectorXcd mode(int k) const;
};

FourierRep to_fourier(const SampledLoop& loop);
FourierRep to_fourier(const Eigen::MatrixXcd& samples);
SampledLoop to_samples(const FourierRep& rep);
Eigen::MatrixXcd to_complex_samples(const FourierRep& rep);

/// Cached trigonometric interpolant for repeated evaluation off the grid.
/// The Nyquist mode is read as a cosine so real samples give a real curve.
class Interpolant {
 public:
  explicit Interpolant(const SampledLoop& loop);
  [[nodiscard]] Point operator()(double t) const;

 private:
  FourierRep rep_;
};

Point eval(const SampledLoop& loop, double t);

/// Spectral derivative of the interpolant, 1 <= order <= kMaxDerivativeOrder.
SampledLoop derivative(const SampledLoop& loop, int order);

/// sup over nodes of |loop^{(k)}(t_j)|, k = 0 meaning the loop itself.
double ck_seminorm(const SampledLoop& loop, int k);

/// rho(s, loop)(t) = loop(t + s).  Exact cyclic shift when s is a multiple of 1/N.
SampledLoop rotate(const SampledLoop& loop, double s);

}  // namespace loopspace
