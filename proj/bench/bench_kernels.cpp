#include <benchmark/benchmark.h>

#include "capflow/distance.hpp"
#include "capflow/energy.hpp"
#include "capflow/parallel.hpp"
#include "capflow/shapes.hpp"

using namespace capflow;

namespace {

// Half-disk droplet on a square d = 1 grid of side n, or a 3D cube for d = 2.
IndicatorSet droplet(int d, int n) {
  const GridSpec g = GridSpec::centered(d, 1.0 / n, n, n);
  return rasterize(Shape::ball({0, 0, 0}, 0.3), g);
}

Exec mode(const benchmark::State& s) { return s.range(2) ? Exec::parallel : Exec::serial; }

void BM_SignedDistance(benchmark::State& state) {
  const auto e = droplet(static_cast<int>(state.range(0)), static_cast<int>(state.range(1)));
  for (auto _ : state) benchmark::DoNotOptimize(signed_distance(e, mode(state)));
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(e.grid().cell_count()));
}

void BM_Perimeter(benchmark::State& state) {
  const auto e = droplet(static_cast<int>(state.range(0)), static_cast<int>(state.range(1)));
  const auto s = PerimeterStencil::make(e.grid(), Neighborhood::N16);
  for (auto _ : state) benchmark::DoNotOptimize(perimeter(e, s, mode(state)));
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(e.grid().cell_count()));
}

void BM_Dissipation(benchmark::State& state) {
  const auto f = droplet(static_cast<int>(state.range(0)), static_cast<int>(state.range(1)));
  const auto sd = signed_distance(f);
  const auto e = rasterize(Shape::ball({0.02, 0, 0}, 0.28), f.grid());
  for (auto _ : state) benchmark::DoNotOptimize(dissipation_term(e, f, sd, 0.01, mode(state)));
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(f.grid().cell_count()));
}

// Arguments: d, cells per side, parallel flag.
void sizes(benchmark::internal::Benchmark* b) {
  for (int par : {0, 1}) {
    b->Args({1, 256, par});
    b->Args({1, 1024, par});
    b->Args({2, 64, par});
  }
}

}  // namespace

BENCHMARK(BM_SignedDistance)->Apply(sizes)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_Perimeter)->Apply(sizes)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_Dissipation)->Apply(sizes)->Unit(benchmark::kMillisecond);

int main(int argc, char** argv) {
  configure_threads_from_env();
  benchmark::Initialize(&argc, argv);
  benchmark::RunSpecifiedBenchmarks();
  return 0;
}
