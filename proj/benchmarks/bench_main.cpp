#include <benchmark/benchmark.h>

#include <cmath>
#include <vector>

#include "sdw/borel.hpp"
#include "sdw/geodesic.hpp"
#include "sdw/hadamard.hpp"
#include "sdw/jets.hpp"

using namespace sdw;

static void JetMultiply(benchmark::State& state) {
  const int dim = static_cast<int>(state.range(0));
  const int order = static_cast<int>(state.range(1));
  const JetLayout& l = JetLayout::get(dim, order);
  Jet<double> a = sin(Jet<double>::variable(l, 0, 0.3)) + Jet<double>::variable(l, dim - 1, 1.1);
  Jet<double> b = exp(Jet<double>::variable(l, 0, -0.2));
  for (auto _ : state) {
    Jet<double> c = a * b;
    benchmark::DoNotOptimize(c);
  }
  state.counters["coefficients"] = static_cast<double>(l.size());
}
BENCHMARK(JetMultiply)->Args({2, 2})->Args({2, 4})->Args({4, 4})->Args({4, 6});

static void SphereFlow(benchmark::State& state) {
  const auto m = catalog::sphere2();
  const RVector x0 = {1.1, 0.2}, v0 = {0.6, 0.9};
  const int steps = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(integrate_flow(m, x0, v0, steps));
}
BENCHMARK(SphereFlow)->Arg(200)->Arg(400)->Unit(benchmark::kMicrosecond);

static void SphereBvp(benchmark::State& state) {
  const auto m = catalog::sphere2();
  const RVector a = {0.8, 0.1}, b = {1.5, -0.6};
  for (auto _ : state) benchmark::DoNotOptimize(shoot_bvp(m, a, b));
}
BENCHMARK(SphereBvp)->Unit(benchmark::kMillisecond);

static void FlatCoefficients(benchmark::State& state) {
  const auto m = catalog::flat(2);
  const auto gauge = GaugeFields::scalar(2, 1, Expression::number(-1.0));
  const RVector x = {0.4, -0.2}, xp = {-0.3, 0.5};
  const int n = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(seeley_dewitt(m, gauge, x, xp, n));
}
BENCHMARK(FlatCoefficients)->DenseRange(0, 2)->Unit(benchmark::kMillisecond);

static void BorelDerivative(benchmark::State& state) {
  using namespace sdw::borel;
  const Grid grid{{0.0}, {1.0}, {40}};
  std::vector<GriddedFunction> h;
  for (int n = 0; n < 8; ++n) {
    const double c = std::tgamma(n + 1.0);
    h.push_back(GriddedFunction::sample(grid, [c](std::span<const double>) { return Complex(c); }));
  }
  const BorelBuilder b(h);
  for (auto _ : state) benchmark::DoNotOptimize(lambda_derivative(b, 3, 3));
}
BENCHMARK(BorelDerivative);
BENCHMARK_MAIN();
