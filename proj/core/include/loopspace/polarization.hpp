#pragma once

#include <Eigen/Core>

#include <vector>

#include "loopspace/loop.hpp"
#include "loopspace/matrix_loop.hpp"

namespace loopspace {

inline constexpr double kRankThreshold = 1e-8;
inline constexpr double kSymbolConditionLimit = 1e8;
inline constexpr int kIndexStabilityStep = 4;
inline constexpr double kDecayNoiseFloor = 1e-14;

/// Coefficients split by mode sign.  Column k of `plus` holds mode k for
/// k = 0..N/2 (the Nyquist bin counts as non-negative); column i of
/// `minus` holds mode -(i + 1).
struct FourierSplit {
  int dim = 0;
  int resolution = 0;
  Eigen::MatrixXcd plus;
  Eigen::MatrixXcd minus;

  [[nodiscard]] FourierRep recombine() const;
};

FourierSplit fourier_split(const FourierRep& rep);
FourierSplit fourier_split(const Eigen::MatrixXcd& complex_samples);
FourierSplit fourier_split(const SampledLoop& loop);

/// P+ and P- acting on a coefficient array (the other sector is zeroed).
FourierRep project_plus(const FourierRep& rep);
FourierRep project_minus(const FourierRep& rep);

/// Largest |k| whose coefficient exceeds tol relative to the largest coefficient.
int active_bandwidth(const MatrixLoop& gamma, double tol = 1e-14);

/// The four sector blocks of multiplication by gamma on modes -K..K.
/// Plus rows/columns list modes 0..K; minus rows/columns list modes -K..-1;
/// within each mode the n vector components are contiguous.
struct OperatorBlocks {
  int size = 0;
  int truncation = 0;
  int bandwidth = 0;
  Eigen::MatrixXcd pp;  ///< L+ -> L+
  Eigen::MatrixXcd pm;  ///< L- -> L+
  Eigen::MatrixXcd mp;  ///< L+ -> L-
  Eigen::MatrixXcd mm;  ///< L- -> L-

  /// Blocks reassembled in natural mode order -K..K.
  [[nodiscard]] Eigen::MatrixXcd assembled() const;
};

/// (M f)_k = sum_m c_{k-m} f_m on modes -K..K, natural order.
Eigen::MatrixXcd multiplication_operator(const MatrixLoop& gamma, int truncation);

/// Throws InvalidArgument when K is below the active bandwidth or 2K + 1
/// exceeds the resolution.
OperatorBlocks toeplitz_blocks(const MatrixLoop& gamma, int truncation);

struct IndexResult {
  int kernel = 0;
  int cokernel = 0;
  [[nodiscard]] int index() const noexcept { return kernel - cokernel; }
};

/// Kernel and cokernel of the A++ block at a single truncation.
IndexResult fredholm_index_at(const OperatorBlocks& blocks, double threshold = kRankThreshold);

/// Index at K, confirmed at K + 4.  Throws SingularSymbol when
/// sup|gamma| sup|gamma^-1| reaches 1e8, IndexUnstable when the two truncations disagree.
int fredholm_index(const MatrixLoop& gamma, int truncation, double threshold = kRankThreshold);

/// Winding number of det gamma from principal-branch phase increments.
int winding_number(const MatrixLoop& gamma);

struct CompactnessProfile {
  Eigen::VectorXd plus_minus;  ///< singular values of A+-, descending
  Eigen::VectorXd minus_plus;  ///< singular values of A-+, descending
  bool decays = false;         ///< both tails satisfy s_j <= C j^-4 past the bandwidth
};

CompactnessProfile compactness_profile(const OperatorBlocks& blocks);

/// s_j <= C j^-4 for 1-based j > bandwidth, C fixed by the first such value,
/// up to kDecayNoiseFloor times the leading value.
bool satisfies_power_decay(const Eigen::VectorXd& values, int bandwidth, double power = 4.0);

}  // namespace loopspace
