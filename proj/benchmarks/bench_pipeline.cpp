#include <benchmark/benchmark.h>

#include "edgepost/edgeworth.hpp"
#include "edgepost/laplace.hpp"
#include "edgepost/models.hpp"

namespace {

using namespace edgepost;

void BM_ClosedFormOracle(benchmark::State& state) {
  const BuiltinModel m = beta_binomial(0.5, 4.0, static_cast<int>(state.range(0)),
                                       static_cast<int>(0.4 * static_cast<double>(state.range(0))));
  for (auto _ : state) benchmark::DoNotOptimize(exact_posterior(m).mean);
}
BENCHMARK(BM_ClosedFormOracle)->Arg(5)->Arg(320);

void BM_QuadratureOracle(benchmark::State& state) {
  const ModelSpec spec = instantiate(beta_binomial(0.5, 4.0, static_cast<int>(state.range(0)),
                                                   static_cast<int>(0.4 * static_cast<double>(state.range(0)))));
  for (auto _ : state) benchmark::DoNotOptimize(build_oracle(spec).mean);
}
BENCHMARK(BM_QuadratureOracle)->Arg(5)->Arg(320)->Unit(benchmark::kMillisecond);

void BM_LaplaceCumulants(benchmark::State& state) {
  const ModelSpec spec = instantiate(beta_binomial(0.5, 4.0, static_cast<int>(state.range(0)),
                                                   static_cast<int>(0.4 * static_cast<double>(state.range(0)))));
  for (auto _ : state) benchmark::DoNotOptimize(laplace_cumulants(spec).kappa3);
}
BENCHMARK(BM_LaplaceCumulants)->Arg(5)->Arg(320)->Unit(benchmark::kMicrosecond);

void BM_NumericLaplaceCumulants(benchmark::State& state) {
  ModelSpec spec = instantiate(beta_binomial(0.5, 4.0, 40, 16));
  spec.derivatives.reset();
  for (auto _ : state) benchmark::DoNotOptimize(laplace_cumulants(spec).kappa3);
}
BENCHMARK(BM_NumericLaplaceCumulants)->Unit(benchmark::kMicrosecond);

void BM_SeriesEvaluation(benchmark::State& state) {
  const EdgeworthSeries s =
      build_series({0.4, 0.2, 0.1}, static_cast<int>(state.range(0)), SeriesKind::density);
  double x = -4.0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(eval_density(s, x));
    x = x > 4.0 ? -4.0 : x + 0.01;
  }
}
BENCHMARK(BM_SeriesEvaluation)->DenseRange(2, 5);

void BM_MleCenteredAndRecenter(benchmark::State& state) {
  const BuiltinModel m = beta_binomial(0.5, 4.0, 40, 16);
  const ModelSpec spec = instantiate(m);
  const PosteriorOracle oracle = exact_posterior(m);
  for (auto _ : state) {
    const EdgeworthSeries s = build_mle_centered(spec, oracle, 3);
    benchmark::DoNotOptimize(recenter(s, 3).terms.size());
  }
}
BENCHMARK(BM_MleCenteredAndRecenter)->Unit(benchmark::kMicrosecond);

}  // namespace

BENCHMARK_MAIN();
