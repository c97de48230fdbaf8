#pragma once

#include <Eigen/Core>

#include <complex>
#include <functional>
#include <vector>

#include "loopspace/loop.hpp"

namespace loopspace {

/// A loop of n x n matrices sampled at the N circle nodes, i.e. an element
/// of L gl_n (complex entries; real loops simply have zero imaginary part).
class MatrixLoop {
 public:
  MatrixLoop(int size, std::vector<Eigen::MatrixXcd> matrices);

  static MatrixLoop from_function(int size, int n, const std::function<Eigen::MatrixXcd(double)>& f);
  static MatrixLoop constant(const Eigen::MatrixXcd& value, int n);
  static MatrixLoop identity(int size, int n);

  [[nodiscard]] int size() const noexcept { return size_; }
  [[nodiscard]] int resolution() const noexcept { return static_cast<int>(matrices_.size()); }
  [[nodiscard]] const Eigen::MatrixXcd& at(int j) const { return matrices_.at(static_cast<std::size_t>(j)); }
  [[nodiscard]] const std::vector<Eigen::MatrixXcd>& matrices() const noexcept { return matrices_; }

  [[nodiscard]] bool is_real(double tol = 1e-14) const;
  /// Largest node-wise 2-norm condition number.
  [[nodiscard]] double max_condition_number() const;
  /// sup |gamma| * sup |gamma^-1| over the nodes; also sees a scalar symbol
  /// that comes close to zero somewhere.
  [[nodiscard]] double symbol_condition_number() const;

 private:
  int size_;
  std::vector<Eigen::MatrixXcd> matrices_;
};

/// Pointwise product (gamma1 gamma2)(t) = gamma1(t) gamma2(t).
MatrixLoop operator*(const MatrixLoop& a, const MatrixLoop& b);

/// Rotation by s nodes' worth of circle parameter; s must be a multiple of 1/N.
MatrixLoop rotate(const MatrixLoop& gamma, double s);

/// (gamma . beta)(t_j) = gamma(t_j) beta(t_j); gamma must be real.
SampledLoop apply_pointwise(const MatrixLoop& gamma, const SampledLoop& beta);

/// Fourier coefficients of each entry: result[b] is the n x n coefficient of
/// mode k with b = k mod N.
std::vector<Eigen::MatrixXcd> matrix_fourier(const MatrixLoop& gamma);

}  // namespace loopspace
