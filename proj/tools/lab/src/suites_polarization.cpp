#include <Eigen/Dense>
#include <Eigen/QR>
#include <unsupported/Eigen/MatrixFunctions>

#include <complex>
#include <numbers>

#include "loopspace/polarization.hpp"
#include "suite_util.hpp"

namespace loopspace::lab::detail {

namespace {

using cd = std::complex<double>;
constexpr double kTwoPi = 2.0 * std::numbers::pi;

constexpr int kCompactnessResolution = 256;
constexpr int kCompactnessTruncation = 64;
constexpr double kDecayRatio = 1e-3;
constexpr double kFiniteRankTol = 1e-14;

cd zpow(double t, int k) { return std::polar(1.0, kTwoPi * k * t); }

Eigen::MatrixXcd random_complex(Sampler& rng, int rows, int cols) {
  Eigen::MatrixXcd m(rows, cols);
  for (int i = 0; i < rows; ++i)
    for (int j = 0; j < cols; ++j) m(i, j) = cd(rng.normal(), rng.normal());
  return m;
}

MatrixLoop scalar_power(int k, int n) {
  return MatrixLoop::from_function(1, n, [k](double t) { return Eigen::MatrixXcd::Constant(1, 1, zpow(t, k)); });
}

struct Symbol {
  MatrixLoop loop;
  int expected;
};

// Q diag(z^a_i) (I + X1 z + Xm1 z^-1) with ||X1|| + ||Xm1|| < 1, so the
// index is -sum a_i by construction.
Symbol banded_symbol(Sampler& rng, int size, int n) {
  const Eigen::MatrixXcd q = Eigen::HouseholderQR<Eigen::MatrixXcd>(random_complex(rng, size, size)).householderQ();
  std::vector<int> a(static_cast<std::size_t>(size));
  int total = 0;
  for (auto& k : a) {
    k = rng.integer(-2, 2);
    total += k;
  }
  Eigen::MatrixXcd x1 = random_complex(rng, size, size), xm1 = random_complex(rng, size, size);
  const double budget = rng.uniform(0.05, 0.4);
  const double split = rng.uniform(0.0, 1.0);
  x1 *= budget * split / x1.operatorNorm();
  xm1 *= budget * (1.0 - split) / xm1.operatorNorm();
  MatrixLoop loop = MatrixLoop::from_function(size, n, [&](double t) {
    Eigen::MatrixXcd d = Eigen::MatrixXcd::Zero(size, size);
    for (int i = 0; i < size; ++i) d(i, i) = zpow(t, a[static_cast<std::size_t>(i)]);
    return Eigen::MatrixXcd(q * d * (Eigen::MatrixXcd::Identity(size, size) + x1 * zpow(t, 1) + xm1 * zpow(t, -1)));
  });
  return {std::move(loop), -total};
}

// Multiplication on modes -K..K from coefficients computed by a direct DFT.
Eigen::MatrixXcd convolution_matrix(const MatrixLoop& g, int truncation) {
  const int n = g.size(), N = g.resolution();
  std::vector<Eigen::MatrixXcd> coeff;
  for (int k = -2 * truncation; k <= 2 * truncation; ++k) {
    Eigen::MatrixXcd c = Eigen::MatrixXcd::Zero(n, n);
    for (int j = 0; j < N; ++j) c += g.at(j) * zpow(static_cast<double>(j) / N, -k);
    coeff.push_back(c / static_cast<double>(N));
  }
  const int K = truncation;
  Eigen::MatrixXcd full((2 * K + 1) * n, (2 * K + 1) * n);
  for (int row = -K; row <= K; ++row)
    for (int col = -K; col <= K; ++col)
      full.block((row + K) * n, (col + K) * n, n, n) = coeff[static_cast<std::size_t>(row - col + 2 * K)];
  return full;
}

double sector_mismatch(const FourierSplit& s, const FourierRep& rep) {
  const FourierRep back = s.recombine();
  double res = 0.0;
  for (int k = -rep.resolution / 2 + 1; k <= rep.resolution / 2; ++k)
    res = std::max(res, (back.mode(k) - rep.mode(k)).cwiseAbs().maxCoeff());
  return res;
}

}  // namespace

void polarization_index(Context& c, Report& r) {
  const int n = c.n(), K = c.cfg.truncation;
  if (2 * (K + kIndexStabilityStep) + 1 > n)
    throw ConfigError("truncation " + std::to_string(K) + " needs resolution at least " +
                      std::to_string(2 * (K + kIndexStabilityStep) + 1));
  double vs_winding = 0, unstable = 0, vs_expected = 0, failures = 0, rotation = 0;
  MaxResidual assembled, split;
  for (int i = 0; i < c.trials(20); ++i) {
    const Symbol s = banded_symbol(c.rng, 2, n);
    try {
      const OperatorBlocks blocks = toeplitz_blocks(s.loop, K);
      const int at_k = fredholm_index_at(blocks).index();
      const int at_k4 = fredholm_index_at(toeplitz_blocks(s.loop, K + kIndexStabilityStep)).index();
      vs_winding += at_k != -winding_number(s.loop) ? 1 : 0;
      unstable += at_k != at_k4 ? 1 : 0;
      vs_expected += at_k != s.expected ? 1 : 0;
      const double shift = static_cast<double>(c.rng.integer(1, n - 1)) / n;
      rotation += fredholm_index(rotate(s.loop, shift), K) != at_k ? 1 : 0;
      if (i < 3) assembled.update((blocks.assembled() - convolution_matrix(s.loop, K)).cwiseAbs().maxCoeff());
    } catch (const Error&) {
      failures += 1;
    }
  }
  double examples = 0, additivity = 0;
  {
    auto check = [&](const MatrixLoop& g, int expect) {
      try {
        examples += fredholm_index(g, K) != expect ? 1 : 0;
      } catch (const Error&) {
        examples += 1;
      }
    };
    check(scalar_power(1, n), -1);
    check(scalar_power(-1, n), 1);
    Eigen::MatrixXcd m(2, 2);
    m << 2.0, 1.0, 0.0, cd(0.0, 3.0);
    check(MatrixLoop::constant(m, n), 0);
    check(MatrixLoop::from_function(2, n, [](double t) {
            Eigen::MatrixXcd d = Eigen::MatrixXcd::Zero(2, 2);
            d(0, 0) = zpow(t, 1);
            d(1, 1) = zpow(t, -1);
            return d;
          }),
          0);
    for (int a = -3; a <= 3; ++a)
      for (int b = -3; b <= 3; ++b) {
        const MatrixLoop ga = scalar_power(a, n), gb = scalar_power(b, n);
        try {
          additivity += fredholm_index(ga * gb, K) != fredholm_index(ga, K) + fredholm_index(gb, K) ? 1 : 0;
        } catch (const Error&) {
          additivity += 1;
        }
      }
  }
  for (int i = 0; i < 5; ++i) {
    Eigen::MatrixXcd samples(3, n);
    for (int j = 0; j < n; ++j)
      for (int d = 0; d < 3; ++d) samples(d, j) = cd(c.rng.normal(), c.rng.normal());
    const FourierRep rep = to_fourier(samples);
    split.update(sector_mismatch(fourier_split(rep), rep));
  }
  const double singular = expect_error(ErrorKind::SingularSymbol, [&] {
    (void)fredholm_index(MatrixLoop::from_function(1, n, [](double t) {
                           return Eigen::MatrixXcd::Constant(1, 1, 1.0 + zpow(t, 1));
                         }),
                         K);
  });
  r.add("index-equals-minus-winding", "the Toeplitz index is minus the winding number of the determinant",
        vs_winding + failures, 0.0);
  r.add("truncation-stability", "the index agrees at truncations K and K+4", unstable + failures, 0.0);
  r.add("index-matches-construction", "the index matches the symbol's diagonal exponents", vs_expected + failures,
        0.0);
  r.add("rotation-invariance", "reparametrising the circle preserves the index", rotation + failures, 0.0);
  r.add("examples", "indices of powers of z, constants and diagonal symbols", examples, 0.0);
  r.add("additivity", "the index is additive on products", additivity, 0.0);
  r.add("assembled-blocks", "the four blocks reassemble the multiplication operator", assembled, c.oracle_tol());
  r.add("split-recombine", "the sector split recombines to the original coefficients", split, c.oracle_tol());
  r.add("singular-symbol", "symbols vanishing on the circle are rejected", singular, 0.0);
}

void compactness(Context& c, Report& r) {
  const int N = kCompactnessResolution, K = kCompactnessTruncation;
  Eigen::Matrix2d a;
  a << 9.6, 16.0, -12.8, 6.4;
  const MatrixLoop entire = MatrixLoop::from_function(2, N, [&](double t) {
    const Eigen::Matrix2d e = (a * std::sin(kTwoPi * t)).exp();
    return Eigen::MatrixXcd(e.cast<cd>());
  });
  const CompactnessProfile p = compactness_profile(toeplitz_blocks(entire, K));
  MaxResidual ratio_pm, ratio_mp;
  for (Eigen::Index j : {8, 16}) {
    ratio_pm.update(p.plus_minus(j + 8) / p.plus_minus(j));
    ratio_mp.update(p.minus_plus(j + 8) / p.minus_plus(j));
  }
  MaxResidual constant, harmonic;
  {
    const auto cp = compactness_profile(toeplitz_blocks(MatrixLoop::constant(random_complex(c.rng, 2, 2), 64), 10));
    constant.update(std::max(cp.plus_minus.maxCoeff(), cp.minus_plus.maxCoeff()));
  }
  for (int m = 1; m <= 3; ++m) {
    const Eigen::MatrixXcd coeff = random_complex(c.rng, 2, 2);
    const MatrixLoop g = MatrixLoop::from_function(2, 64, [&](double t) {
      return Eigen::MatrixXcd(coeff * zpow(t, m) + coeff.adjoint() * zpow(t, -m));
    });
    const auto hp = compactness_profile(toeplitz_blocks(g, 12));
    for (Eigen::Index j = 2 * m; j < hp.plus_minus.size(); ++j) harmonic.update(hp.plus_minus(j));
    for (Eigen::Index j = 2 * m; j < hp.minus_plus.size(); ++j) harmonic.update(hp.minus_plus(j));
  }
  r.add("decay-plus-minus", "singular values of the L- to L+ block drop by 1e3 per 8 modes", ratio_pm, kDecayRatio);
  r.add("decay-minus-plus", "singular values of the L+ to L- block drop by 1e3 per 8 modes", ratio_mp, kDecayRatio);
  r.add("power-decay", "off-diagonal singular values decay faster than j^-4", p.decays ? 0.0 : 1.0, 0.0);
  r.add("constant-symbol", "constant symbols have vanishing off-diagonal blocks", constant, kFiniteRankTol);
  r.add("harmonic-finite-rank", "a single harmonic gives finite-rank off-diagonal blocks", harmonic,
        kFiniteRankTol);
}

}  // namespace loopspace::lab::detail
