#include "carnot/integrate.hpp"
#include "carnot/poincare.hpp"
#include "carnot/sobolev.hpp"

#include <benchmark/benchmark.h>

#include <memory>

using namespace carnot;

namespace {

Execution mode(const benchmark::State& state) { return state.range(0) ? Execution::parallel : Execution::serial; }

std::shared_ptr<const StratifiedAlgebra> h1() {
  static const auto alg = std::make_shared<const StratifiedAlgebra>(builtin_group("heisenberg(1)"));
  return alg;
}

IntegratorConfig config(const benchmark::State& state, std::uint64_t samples) {
  IntegratorConfig c;
  c.samples = samples;
  c.execution = mode(state);
  return c;
}

void BM_Accumulate(benchmark::State& state) {
  for (auto _ : state) {
    const Moments m = accumulate(1, 0, 1 << 20, mode(state), [](StreamRng& rng) {
      const double x = rng.uniform(), y = rng.uniform();
      return Draw{x * x + y * y <= 1.0 ? 4.0 : 0.0};
    });
    benchmark::DoNotOptimize(m.sum);
  }
  state.SetItemsProcessed(state.iterations() * (1 << 20));
}

void BM_BallIntegral(benchmark::State& state) {
  const auto alg = h1();
  const Gauge g = Gauge::koranyi(*alg);
  const IntegratorConfig c = config(state, 1 << 18);
  for (auto _ : state) {
    const Estimate e = integrate_ball(c, g, *alg, [](const Point& x) { return x[0] * x[0]; }, alg->zero(), 1.0);
    benchmark::DoNotOptimize(e.value);
  }
  state.SetItemsProcessed(state.iterations() * c.samples);
}

void BM_BBMFunctional(benchmark::State& state) {
  const auto alg = h1();
  const Gauge g = Gauge::koranyi(*alg);
  const MollifierFamily fam(MollifierKind::box, 4, M_PI * M_PI / 8.0);
  const ScalarField f = builtin_field("windowed_gaussian", alg);
  const IntegratorConfig c = config(state, 1 << 17);
  for (auto _ : state) {
    const Estimate e = bbm_functional(c, g, f, 2.0, fam, 8);
    benchmark::DoNotOptimize(e.value);
  }
  state.SetItemsProcessed(state.iterations() * c.samples);
}

void BM_PairIntegral(benchmark::State& state) {
  const auto alg = h1();
  const Gauge g = Gauge::koranyi(*alg);
  const ScalarField f = builtin_field("bump", alg);
  const IntegratorConfig c = config(state, 1 << 17);
  for (auto _ : state) {
    const Estimate e = window_pair_integral(c, g, f, 2.0, Weight::power(0.5), 1.0, 8.0, alg->zero(), 1e-7, 1);
    benchmark::DoNotOptimize(e.value);
  }
  state.SetItemsProcessed(state.iterations() * c.samples);
}

}  // namespace

BENCHMARK(BM_Accumulate)->Arg(0)->Arg(1)->ArgName("parallel")->Unit(benchmark::kMillisecond);
BENCHMARK(BM_BallIntegral)->Arg(0)->Arg(1)->ArgName("parallel")->Unit(benchmark::kMillisecond);
BENCHMARK(BM_BBMFunctional)->Arg(0)->Arg(1)->ArgName("parallel")->Unit(benchmark::kMillisecond);
BENCHMARK(BM_PairIntegral)->Arg(0)->Arg(1)->ArgName("parallel")->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
