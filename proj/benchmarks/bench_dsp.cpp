#include <benchmark/benchmark.h>

#include <cmath>
#include <numbers>
#include <vector>

#include "eegshift/dsp.hpp"
#include "eegshift/fft.hpp"
#include "eegshift/rng.hpp"
#include "eegshift/synth.hpp"

using namespace eegshift;

namespace {

std::vector<double> noise(std::size_t n) {
  Rng rng(42);
  std::vector<double> x(n);
  for (double& v : x) v = rng.normal();
  return x;
}

void BM_FftPow2(benchmark::State& state) {
  const std::size_t n = static_cast<std::size_t>(state.range(0));
  FftPlan plan(n);
  std::vector<std::complex<double>> buf(n);
  const auto x = noise(n);
  for (auto _ : state) {
    for (std::size_t i = 0; i < n; ++i) buf[i] = x[i];
    plan.forward(buf);
    benchmark::DoNotOptimize(buf.data());
  }
  state.SetItemsProcessed(state.iterations() * static_cast<int64_t>(n));
}
BENCHMARK(BM_FftPow2)->Arg(512)->Arg(1024)->Arg(4096);

// 500-sample trials take the Bluestein path
void BM_AnalyticSignal(benchmark::State& state) {
  const auto x = noise(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(analytic_signal(x));
}
BENCHMARK(BM_AnalyticSignal)->Arg(500)->Arg(512)->Arg(1000);

void BM_FilterSignal(benchmark::State& state) {
  const auto coeffs = design_bandpass(FilterSpec{});
  const auto x = noise(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(filter_signal(x, coeffs));
}
BENCHMARK(BM_FilterSignal)->Arg(500)->Arg(2000);

void BM_ExtractFeatures(benchmark::State& state) {
  GeneratorConfig cfg;
  cfg.n_channels = 8;
  Rng rng(3);
  const Trial t = synthesize_trial(GazeLabel{0.0, 300.0, Direction::Right}, SubjectParams{1, 1.0, 0.0},
                                   Paradigm::ProAntisaccade, cfg, rng);
  const FeatureExtractor fx(FilterSpec{});
  for (auto _ : state) benchmark::DoNotOptimize(fx(t));
}
BENCHMARK(BM_ExtractFeatures);

}  // namespace
