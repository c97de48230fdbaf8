#include "loopspace/polarization.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>

#include "loopspace/error.hpp"

namespace loopspace {

using cd = std::complex<double>;

FourierRep FourierSplit::recombine() const {
  FourierRep rep{dim, resolution, Eigen::MatrixXcd::Zero(dim, resolution)};
  for (int k = 0; k < plus.cols(); ++k) rep.coeffs.col(FourierRep::bin_of_mode(k, resolution)) = plus.col(k);
  for (int i = 0; i < minus.cols(); ++i) {
    rep.coeffs.col(FourierRep::bin_of_mode(-(i + 1), resolution)) = minus.col(i);
  }
  return rep;
}

FourierSplit fourier_split(const FourierRep& rep) {
  const int n = rep.resolution;
  FourierSplit split{rep.dim, n, Eigen::MatrixXcd(rep.dim, n / 2 + 1), Eigen::MatrixXcd(rep.dim, n / 2 - 1)};
  for (int k = 0; k <= n / 2; ++k) split.plus.col(k) = rep.coeffs.col(k);
  for (int i = 0; i < n / 2 - 1; ++i) split.minus.col(i) = rep.coeffs.col(FourierRep::bin_of_mode(-(i + 1), n));
  return split;
}

FourierSplit fourier_split(const Eigen::MatrixXcd& complex_samples) { return fourier_split(to_fourier(complex_samples)); }

FourierSplit fourier_split(const SampledLoop& loop) { return fourier_split(to_fourier(loop)); }

namespace {

FourierRep keep_sector(const FourierRep& rep, bool plus) {
  FourierRep out = rep;
  for (int b = 0; b < rep.resolution; ++b) {
    const bool is_plus = FourierRep::mode_of_bin(b, rep.resolution) >= 0;
    if (is_plus != plus) out.coeffs.col(b).setZero();
  }
  return out;
}

double block_norm(const Eigen::MatrixXcd& m) { return m.cwiseAbs().maxCoeff(); }

}  // namespace

FourierRep project_plus(const FourierRep& rep) { return keep_sector(rep, true); }
FourierRep project_minus(const FourierRep& rep) { return keep_sector(rep, false); }

int active_bandwidth(const MatrixLoop& gamma, double tol) {
  const auto coeffs = matrix_fourier(gamma);
  const int n = gamma.resolution();
  double biggest = 0.0;
  for (const auto& c : coeffs) biggest = std::max(biggest, block_norm(c));
  if (biggest == 0.0) return 0;
  int band = 0;
  for (int b = 0; b < n; ++b) {
    if (block_norm(coeffs[static_cast<std::size_t>(b)]) > tol * biggest) {
      band = std::max(band, std::abs(FourierRep::mode_of_bin(b, n)));
    }
  }
  return band;
}

Eigen::MatrixXcd multiplication_operator(const MatrixLoop& gamma, int truncation) {
  const int n = gamma.resolution();
  const int s = gamma.size();
  const int K = truncation;
  if (K < 0) raise(ErrorKind::InvalidArgument, "truncation must be non-negative");
  const auto coeffs = matrix_fourier(gamma);
  const int modes = 2 * K + 1;
  Eigen::MatrixXcd op = Eigen::MatrixXcd::Zero(modes * s, modes * s);
  for (int k = -K; k <= K; ++k) {
    for (int m = -K; m <= K; ++m) {
      const int d = k - m;
      if (2 * std::abs(d) >= n) continue;
      op.block((k + K) * s, (m + K) * s, s, s) = coeffs[static_cast<std::size_t>(FourierRep::bin_of_mode(d, n))];
    }
  }
  return op;
}

OperatorBlocks toeplitz_blocks(const MatrixLoop& gamma, int truncation) {
  const int K = truncation;
  const int s = gamma.size();
  const int band = active_bandwidth(gamma);
  if (K < band) raise(ErrorKind::InvalidArgument, "truncation is below the symbol bandwidth");
  if (2 * K + 1 > gamma.resolution()) raise(ErrorKind::InvalidArgument, "truncation exceeds the loop resolution");
  const Eigen::MatrixXcd op = multiplication_operator(gamma, K);
  const int minus = K * s;
  const int plus = (K + 1) * s;
  OperatorBlocks blocks;
  blocks.size = s;
  blocks.truncation = K;
  blocks.bandwidth = band;
  blocks.mm = op.block(0, 0, minus, minus);
  blocks.mp = op.block(0, minus, minus, plus);
  blocks.pm = op.block(minus, 0, plus, minus);
  blocks.pp = op.block(minus, minus, plus, plus);
  return blocks;
}

Eigen::MatrixXcd OperatorBlocks::assembled() const {
  const int minus = truncation * size;
  const int plus = (truncation + 1) * size;
  Eigen::MatrixXcd op(minus + plus, minus + plus);
  op.block(0, 0, minus, minus) = mm;
  op.block(0, minus, minus, plus) = mp;
  op.block(minus, 0, plus, minus) = pm;
  op.block(minus, minus, plus, plus) = pp;
  return op;
}

namespace {

int nullity(const Eigen::MatrixXcd& a, double threshold) {
  if (a.cols() == 0) return 0;
  const Eigen::JacobiSVD<Eigen::MatrixXcd> svd(a);
  const Eigen::VectorXd& sv = svd.singularValues();
  const double cut = threshold * std::max(1.0, sv.size() > 0 ? sv(0) : 0.0);
  int rank = 0;
  for (int i = 0; i < sv.size(); ++i) rank += sv(i) > cut ? 1 : 0;
  return static_cast<int>(a.cols()) - rank;
}

}  // namespace

IndexResult fredholm_index_at(const OperatorBlocks& blocks, double threshold) {
  // Only inputs whose full image stays inside the truncation are kept, so
  // the section sees no artificial boundary kernel.
  const int usable = blocks.truncation - blocks.bandwidth + 1;
  if (usable < 1) raise(ErrorKind::InvalidArgument, "truncation too small for the symbol bandwidth");
  const int cols = usable * blocks.size;
  const Eigen::MatrixXcd adjoint = blocks.pp.adjoint();
  return {nullity(blocks.pp.leftCols(cols), threshold), nullity(adjoint.leftCols(cols), threshold)};
}

int fredholm_index(const MatrixLoop& gamma, int truncation, double threshold) {
  if (!(gamma.symbol_condition_number() < kSymbolConditionLimit)) {
    raise(ErrorKind::SingularSymbol, "symbol is not invertible at every node");
  }
  const int first = fredholm_index_at(toeplitz_blocks(gamma, truncation), threshold).index();
  const int second = fredholm_index_at(toeplitz_blocks(gamma, truncation + kIndexStabilityStep), threshold).index();
  if (first != second) {
    raise(ErrorKind::IndexUnstable, "index changes between truncations " + std::to_string(truncation) + " and " +
                                        std::to_string(truncation + kIndexStabilityStep));
  }
  return first;
}

int winding_number(const MatrixLoop& gamma) {
  const int n = gamma.resolution();
  std::vector<cd> det(static_cast<std::size_t>(n));
  for (int j = 0; j < n; ++j) {
    det[static_cast<std::size_t>(j)] = gamma.at(j).determinant();
    if (det[static_cast<std::size_t>(j)] == cd(0.0, 0.0)) raise(ErrorKind::SingularSymbol, "determinant vanishes");
  }
  double total = 0.0;
  for (int j = 0; j < n; ++j) {
    total += std::arg(det[static_cast<std::size_t>((j + 1) % n)] / det[static_cast<std::size_t>(j)]);
  }
  return static_cast<int>(std::lround(total / (2.0 * std::numbers::pi)));
}

bool satisfies_power_decay(const Eigen::VectorXd& values, int bandwidth, double power) {
  const int first = bandwidth + 1;
  if (values.size() < first) return true;
  // Values below the roundoff level of the leading singular value carry no
  // information about decay and are accepted.
  const double floor = kDecayNoiseFloor * std::max(1.0, values(0));
  const double c = values(first - 1) * std::pow(static_cast<double>(first), power);
  for (int j = first; j <= values.size(); ++j) {
    const double bound = c * std::pow(static_cast<double>(j), -power);
    if (values(j - 1) > bound * (1.0 + 1e-9) + floor) return false;
  }
  return true;
}

CompactnessProfile compactness_profile(const OperatorBlocks& blocks) {
  auto singular = [](const Eigen::MatrixXcd& a) -> Eigen::VectorXd {
    if (a.size() == 0) return {};
    return Eigen::JacobiSVD<Eigen::MatrixXcd>(a).singularValues();
  };
  CompactnessProfile profile{singular(blocks.pm), singular(blocks.mp), false};
  const int cutoff = blocks.size * blocks.bandwidth;
  profile.decays = satisfies_power_decay(profile.plus_minus, cutoff) && satisfies_power_decay(profile.minus_plus, cutoff);
  return profile;
}

}  // namespace loopspace
