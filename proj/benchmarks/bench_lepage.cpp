#include <benchmark/benchmark.h>

#include <cmath>
#include <vector>

#include "conestable/gallery.hpp"
#include "conestable/sampling.hpp"
#include "conestable/stat_verify.hpp"

using namespace conestable;

namespace {

void BM_LePageMaxExactStop(benchmark::State& state) {
  const HalfLineMax cone;
  const LePageConfig cfg{1.5, SpectralMeasure(cone, {{{1.0}, 1.0}}), std::nullopt, ExactStop{}};
  Rng rng(1);
  for (auto _ : state) benchmark::DoNotOptimize(lepage_sample(cone, cfg, rng));
  state.SetItemsProcessed(state.iterations());
}
BENCHMARK(BM_LePageMaxExactStop);

void BM_LePagePlusExpectedTail(benchmark::State& state) {
  const HalfLinePlus cone;
  const double tol = std::pow(10.0, -static_cast<double>(state.range(0)));
  const LePageConfig cfg{0.5, SpectralMeasure(cone, {{{1.0}, 1.0}}), std::nullopt, ExpectedTail{tol}};
  Rng rng(2);
  for (auto _ : state) benchmark::DoNotOptimize(lepage_sample(cone, cfg, rng));
  state.SetItemsProcessed(state.iterations());
}
BENCHMARK(BM_LePagePlusExpectedTail)->DenseRange(1, 4);

void BM_LePageConvexBody(benchmark::State& state) {
  const ConvexBody2D cone(64);
  const LePageConfig cfg{0.7, SpectralMeasure(cone, {{cone.segment({-1.0, 0.0}, {1.0, 0.0}), 1.0},
                                                     {cone.segment({0.0, 0.0}, {0.0, 1.0}), 1.0}}),
                         std::nullopt, ExpectedTail{0.1}};
  Rng rng(3);
  for (auto _ : state) benchmark::DoNotOptimize(lepage_sample(cone, cfg, rng));
  state.SetItemsProcessed(state.iterations());
}
BENCHMARK(BM_LePageConvexBody);

void BM_KsTwoSample(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  Rng rng(4);
  std::vector<double> a(n), b(n);
  for (auto& v : a) v = rng.uniform();
  for (auto& v : b) v = rng.uniform();
  for (auto _ : state) benchmark::DoNotOptimize(ks_two_sample(a, b));
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(2 * n));
}
BENCHMARK(BM_KsTwoSample)->Range(1 << 10, 1 << 16);

}  // namespace

BENCHMARK_MAIN();
