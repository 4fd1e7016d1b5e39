#include <benchmark/benchmark.h>

#include <vector>

#include "eegshift/matrix.hpp"
#include "eegshift/models.hpp"
#include "eegshift/rng.hpp"

using namespace eegshift;

namespace {

// two shifted Gaussian blobs, F = 24 like the default feature layout
LabeledMatrix blobs(std::size_t n, std::size_t f) {
  Rng rng(11);
  LabeledMatrix m;
  m.X = Matrix(n, f);
  m.y.resize(n);
  m.subject_ids.assign(n, 1);
  for (std::size_t i = 0; i < n; ++i) {
    m.y[i] = static_cast<int>(i % 2);
    for (std::size_t j = 0; j < f; ++j) m.X(i, j) = rng.normal() + (j < 4 ? 0.8 * m.y[i] : 0.0);
  }
  return m;
}

void train(benchmark::State& state, ModelKind kind) {
  const LabeledMatrix data = blobs(static_cast<std::size_t>(state.range(0)), 24);
  const HyperParams hp;
  for (auto _ : state) benchmark::DoNotOptimize(train_model(kind, data, hp, 1));
}

void BM_TrainTree(benchmark::State& s) { train(s, ModelKind::DecisionTree); }
void BM_TrainForest(benchmark::State& s) { train(s, ModelKind::RandomForest); }
void BM_TrainGBoost(benchmark::State& s) { train(s, ModelKind::GradientBoost); }
void BM_TrainXgb(benchmark::State& s) { train(s, ModelKind::XGBoostStyle); }
void BM_TrainAda(benchmark::State& s) { train(s, ModelKind::AdaBoost); }
void BM_TrainLinearSvc(benchmark::State& s) { train(s, ModelKind::LinearSVC); }
void BM_TrainRbfSvc(benchmark::State& s) { train(s, ModelKind::RbfSVC); }

BENCHMARK(BM_TrainTree)->Arg(2800)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_TrainForest)->Arg(2800)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_TrainGBoost)->Arg(2800)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_TrainXgb)->Arg(2800)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_TrainAda)->Arg(2800)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_TrainLinearSvc)->Arg(2800)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_TrainRbfSvc)->Arg(700)->Arg(2800)->Unit(benchmark::kMillisecond);

}  // namespace
BENCHMARK_MAIN();
