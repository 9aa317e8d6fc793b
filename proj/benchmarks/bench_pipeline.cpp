#include <benchmark/benchmark.h>

#include <cmath>

#include "homsamp/battery.hpp"
#include "homsamp/besov.hpp"
#include "homsamp/dyadic.hpp"
#include "homsamp/frame.hpp"
#include "homsamp/sampling.hpp"
#include "homsamp/space.hpp"

using namespace homsamp;

namespace {

int finest_level(std::size_t n) { return int(std::lround(std::log2(double(n)))); }

void BM_Discretize(benchmark::State& st) {
  const auto n = std::size_t(st.range(0));
  for (auto _ : st) benchmark::DoNotOptimize(discretize("anisotropic-square", n));
}
BENCHMARK(BM_Discretize)->Arg(1024)->Arg(4096)->Unit(benchmark::kMillisecond);

void BM_BallQuery(benchmark::State& st) {
  const auto s = discretize("torus-1d", std::size_t(st.range(0)));
  std::vector<std::size_t> out;
  std::size_t x = 0;
  for (auto _ : st) {
    s.ball(x, 0.01, out);
    x = (x + 97) % s.size();
    benchmark::DoNotOptimize(out.data());
  }
}
BENCHMARK(BM_BallQuery)->Arg(4096)->Arg(65536);

void BM_BuildDyadic(benchmark::State& st) {
  const auto n = std::size_t(st.range(0));
  const auto s = discretize("torus-1d", n);
  for (auto _ : st) benchmark::DoNotOptimize(build_dyadic_system(s, 0, finest_level(n)));
}
BENCHMARK(BM_BuildDyadic)->Arg(1024)->Arg(4096)->Arg(16384)->Unit(benchmark::kMillisecond);

void BM_BuildFrame(benchmark::State& st) {
  const auto n = std::size_t(st.range(0));
  const auto s = discretize("torus-1d", n);
  const auto sys = build_dyadic_system(s, 0, finest_level(n));
  for (auto _ : st) benchmark::DoNotOptimize(build_frame(sys, s));
}
BENCHMARK(BM_BuildFrame)->Arg(1024)->Arg(4096)->Unit(benchmark::kMillisecond);

void BM_AnalyzeSynthesize(benchmark::State& st) {
  const auto n = std::size_t(st.range(0));
  const auto s = discretize("torus-1d", n);
  const auto sys = build_dyadic_system(s, 0, finest_level(n));
  const auto frame = build_frame(sys, s);
  const auto f = evaluate_function("bump", s);
  for (auto _ : st) benchmark::DoNotOptimize(synthesize(frame, analyze(frame, s, f)));
}
BENCHMARK(BM_AnalyzeSynthesize)->Arg(1024)->Arg(4096)->Unit(benchmark::kMillisecond);

void BM_BesovNorm(benchmark::State& st) {
  std::vector<std::size_t> sizes;
  for (int j = 0; j <= 14; ++j) sizes.push_back(std::size_t(1) << j);
  auto c = CoefficientTable::zeros(0, 2, sizes);
  for (int j = 0; j <= 14; ++j) {
    for (std::size_t k = 0; k < sizes[std::size_t(j)]; ++k) c.at(j, k) = std::sin(double(k + j));
  }
  for (auto _ : st) benchmark::DoNotOptimize(besov_norm(c, {0.5, 2.0, 1.0}, 1.0));
}
BENCHMARK(BM_BesovNorm);

void BM_SamplingSweep(benchmark::State& st) {
  const auto s = discretize("torus-1d", 4096);
  const auto sys = build_dyadic_system(s, 0, 12);
  const auto f = evaluate_function("sin:3", s);
  for (auto _ : st) {
    double acc = 0.0;
    for (int l = 0; l <= 12; ++l) acc += sampling_error(s, sys, f, l, 2.0);
    benchmark::DoNotOptimize(acc);
  }
}
BENCHMARK(BM_SamplingSweep)->Unit(benchmark::kMillisecond);

void BM_Cardinality(benchmark::State& st) {
  const auto s = discretize("torus-1d", 4096);
  const auto sys = build_dyadic_system(s, 0, 12);
  for (auto _ : st) benchmark::DoNotOptimize(cardinality_diagnostics(s, sys, 1.5, 6));
}
BENCHMARK(BM_Cardinality)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
