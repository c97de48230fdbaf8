#include <benchmark/benchmark.h>

#include <cmath>
#include <numbers>

#include "loopspace/charts.hpp"
#include "loopspace/geometry.hpp"
#include "loopspace/polarization.hpp"

using namespace loopspace;

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

SampledLoop wobbly_sphere_loop(int n) {
  return SampledLoop::from_function(3, n, [](double t) {
    const Eigen::Vector3d p(std::cos(kTwoPi * t), std::sin(kTwoPi * t), 0.3 * std::sin(2 * kTwoPi * t));
    return Eigen::VectorXd(p.normalized());
  });
}

TangentSection smooth_section(const EmbeddedManifold& m, const SampledLoop& base, double scale) {
  const SampledLoop ambient = SampledLoop::from_function(3, base.resolution(), [&](double t) {
    return Eigen::VectorXd(scale * Eigen::Vector3d(std::sin(kTwoPi * t), std::cos(3 * kTwoPi * t), 1.0));
  });
  return TangentSection::project(m, base, ambient);
}

void BM_SpectralDerivative(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const SampledLoop loop = wobbly_sphere_loop(n);
  for (auto _ : state) benchmark::DoNotOptimize(derivative(loop, 1));
  state.SetComplexityN(n);
}
BENCHMARK(BM_SpectralDerivative)->RangeMultiplier(4)->Range(64, 4096)->Complexity();

void BM_ChartRoundTrip(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const auto s = EmbeddedManifold::sphere2();
  const SampledLoop base = wobbly_sphere_loop(n);
  const Chart chart(base, LocalAdditionSpec::standard(s));
  const TangentSection beta = smooth_section(s, base, 0.3);
  for (auto _ : state) benchmark::DoNotOptimize(chart_inverse(chart, chart_forward(chart, beta)));
}
BENCHMARK(BM_ChartRoundTrip)->Arg(128)->Arg(512);

void BM_LoopGeodesic(benchmark::State& state) {
  const auto s = EmbeddedManifold::sphere2();
  const Connection lc = Connection::levi_civita(s);
  const SampledLoop base = wobbly_sphere_loop(128);
  const TangentSection nu = smooth_section(s, base, 1.0);
  const int steps = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(loop_geodesic(lc, nu, 1.0, steps));
}
BENCHMARK(BM_LoopGeodesic)->Arg(50)->Arg(200);

void BM_ToeplitzIndex(benchmark::State& state) {
  const int k = static_cast<int>(state.range(0));
  const MatrixLoop g = MatrixLoop::from_function(2, 256, [](double t) {
    Eigen::MatrixXcd m(2, 2);
    const std::complex<double> z = std::polar(1.0, kTwoPi * t);
    m << z, 0.2, 0.1 / z, 1.0;
    return m;
  });
  for (auto _ : state) benchmark::DoNotOptimize(fredholm_index(g, k));
}
BENCHMARK(BM_ToeplitzIndex)->Arg(16)->Arg(40)->Arg(64)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
