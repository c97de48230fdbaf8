#include "loopspace/matrix_loop.hpp"

#include <Eigen/Dense>
#include <unsupported/Eigen/FFT>

#include <cmath>
#include <limits>
#include <numbers>

#include "loopspace/error.hpp"

namespace loopspace {

using cd = std::complex<double>;

MatrixLoop::MatrixLoop(int size, std::vector<Eigen::MatrixXcd> matrices)
    : size_(size), matrices_(std::move(matrices)) {
  if (size_ < 1) raise(ErrorKind::InvalidArgument, "matrix size must be positive");
  if (!is_valid_resolution(static_cast<int>(matrices_.size()))) {
    raise(ErrorKind::InvalidArgument, "matrix loop resolution must be a power of two >= 8");
  }
  for (const auto& m : matrices_) {
    if (m.rows() != size_ || m.cols() != size_) raise(ErrorKind::InvalidArgument, "matrix shape mismatch");
    if (!m.allFinite()) raise(ErrorKind::InvalidArgument, "matrix loop entries must be finite");
  }
}

MatrixLoop MatrixLoop::from_function(int size, int n, const std::function<Eigen::MatrixXcd(double)>& f) {
  std::vector<Eigen::MatrixXcd> mats;
  mats.reserve(static_cast<std::size_t>(n));
  for (int j = 0; j < n; ++j) mats.push_back(f(SampledLoop::node_time(j, n)));
  return {size, std::move(mats)};
}

MatrixLoop MatrixLoop::constant(const Eigen::MatrixXcd& value, int n) {
  return {static_cast<int>(value.rows()), std::vector<Eigen::MatrixXcd>(static_cast<std::size_t>(n), value)};
}

MatrixLoop MatrixLoop::identity(int size, int n) {
  return constant(Eigen::MatrixXcd::Identity(size, size), n);
}

bool MatrixLoop::is_real(double tol) const {
  for (const auto& m : matrices_) {
    if (m.imag().cwiseAbs().maxCoeff() > tol) return false;
  }
  return true;
}

double MatrixLoop::max_condition_number() const {
  double worst = 0.0;
  for (const auto& m : matrices_) {
    const Eigen::JacobiSVD<Eigen::MatrixXcd> svd(m);
    const auto& s = svd.singularValues();
    const double smallest = s(s.size() - 1);
    if (smallest == 0.0) return std::numeric_limits<double>::infinity();
    worst = std::max(worst, s(0) / smallest);
  }
  return worst;
}

double MatrixLoop::symbol_condition_number() const {
  double largest = 0.0;
  double smallest = std::numeric_limits<double>::infinity();
  for (const auto& m : matrices_) {
    const Eigen::JacobiSVD<Eigen::MatrixXcd> svd(m);
    const auto& s = svd.singularValues();
    largest = std::max(largest, s(0));
    smallest = std::min(smallest, s(s.size() - 1));
  }
  if (smallest == 0.0) return std::numeric_limits<double>::infinity();
  return largest / smallest;
}

MatrixLoop operator*(const MatrixLoop& a, const MatrixLoop& b) {
  if (a.size() != b.size() || a.resolution() != b.resolution()) {
    raise(ErrorKind::InvalidArgument, "matrix loop shapes differ");
  }
  std::vector<Eigen::MatrixXcd> mats;
  mats.reserve(static_cast<std::size_t>(a.resolution()));
  for (int j = 0; j < a.resolution(); ++j) mats.emplace_back(a.at(j) * b.at(j));
  return {a.size(), std::move(mats)};
}

std::vector<Eigen::MatrixXcd> matrix_fourier(const MatrixLoop& gamma) {
  const int n = gamma.resolution();
  const int s = gamma.size();
  std::vector<Eigen::MatrixXcd> coeffs(static_cast<std::size_t>(n), Eigen::MatrixXcd(s, s));
  Eigen::FFT<double> fft;
  std::vector<cd> in(static_cast<std::size_t>(n)), out(static_cast<std::size_t>(n));
  for (int r = 0; r < s; ++r) {
    for (int c = 0; c < s; ++c) {
      for (int j = 0; j < n; ++j) in[static_cast<std::size_t>(j)] = gamma.at(j)(r, c);
      fft.fwd(out, in);
      for (int b = 0; b < n; ++b) coeffs[static_cast<std::size_t>(b)](r, c) = out[static_cast<std::size_t>(b)] / static_cast<double>(n);
    }
  }
  return coeffs;
}

MatrixLoop rotate(const MatrixLoop& gamma, double s) {
  const int n = gamma.resolution();
  const double sr = reduce_circle(s);
  const double shift = sr * n;
  const double nearest = std::round(shift);
  std::vector<Eigen::MatrixXcd> mats(static_cast<std::size_t>(n));
  if (std::abs(shift - nearest) <= 1e-9 * n) {
    const int m = static_cast<int>(nearest) % n;
    for (int j = 0; j < n; ++j) mats[static_cast<std::size_t>(j)] = gamma.at((j + m) % n);
    return {gamma.size(), std::move(mats)};
  }
  auto coeffs = matrix_fourier(gamma);
  for (int b = 0; b < n; ++b) {
    const int k = b <= n / 2 ? b : b - n;
    if (k == n / 2) {
      coeffs[static_cast<std::size_t>(b)] *= std::cos(std::numbers::pi * n * sr);
    } else {
      const double ph = 2.0 * std::numbers::pi * k * sr;
      coeffs[static_cast<std::size_t>(b)] *= cd(std::cos(ph), std::sin(ph));
    }
  }
  for (int j = 0; j < n; ++j) {
    Eigen::MatrixXcd acc = Eigen::MatrixXcd::Zero(gamma.size(), gamma.size());
    for (int b = 0; b < n; ++b) {
      const double ph = 2.0 * std::numbers::pi * b * j / n;
      acc += coeffs[static_cast<std::size_t>(b)] * cd(std::cos(ph), std::sin(ph));
    }
    mats[static_cast<std::size_t>(j)] = acc;
  }
  return {gamma.size(), std::move(mats)};
}

SampledLoop apply_pointwise(const MatrixLoop& gamma, const SampledLoop& beta) {
  if (beta.dim() != gamma.size() || beta.resolution() != gamma.resolution()) {
    raise(ErrorKind::InvalidArgument, "matrix loop and section shapes differ");
  }
  if (!gamma.is_real(1e-12)) raise(ErrorKind::InvalidArgument, "pointwise action needs a real matrix loop");
  Eigen::MatrixXd out(beta.dim(), beta.resolution());
  for (int j = 0; j < beta.resolution(); ++j) out.col(j) = gamma.at(j).real() * beta.samples().col(j);
  return SampledLoop(std::move(out));
}

}  // namespace loopspace
