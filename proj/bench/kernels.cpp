// Serial reference kernels against their parallel or accelerated versions.

#include <benchmark/benchmark.h>

#include <cmath>

#include "emblens/contour.hpp"
#include "emblens/density.hpp"
#include "emblens/descriptive.hpp"
#include "emblens/synthetic.hpp"

namespace {

using namespace emblens;

Embedding cloud(std::size_t n) {
  SyntheticSpec spec;
  spec.n_samples = n;
  spec.n_features = 1;
  return gaussian_mixture(spec).embedding;
}

SampleSet every_other(std::size_t n) {
  SampleSet s(n);
  for (std::size_t i = 0; i < n; i += 2) s.insert(i);
  return s;
}

void knn_buckets(benchmark::State& state) {
  const auto e = cloud(static_cast<std::size_t>(state.range(0)));
  const auto k = static_cast<std::size_t>(std::ceil(std::sqrt(static_cast<double>(e.size()))));
  for (auto _ : state) benchmark::DoNotOptimize(kth_neighbor_distances(e, k));
}

void knn_exhaustive(benchmark::State& state) {
  const auto e = cloud(static_cast<std::size_t>(state.range(0)));
  const auto k = static_cast<std::size_t>(std::ceil(std::sqrt(static_cast<double>(e.size()))));
  for (auto _ : state) benchmark::DoNotOptimize(reference::kth_neighbor_distances(e, k));
}

template <KdeMethod M>
void kde_engine(benchmark::State& state) {
  const auto e = cloud(static_cast<std::size_t>(state.range(0)));
  const double sigma = adaptive_bandwidth(e);
  const KdeEngine engine(make_grid(e, sigma, 128), sigma);
  const auto sel = every_other(e.size());
  for (auto _ : state) benchmark::DoNotOptimize(engine.evaluate(e, sel, {}, M));
}

void kde_direct_parallel(benchmark::State& state) {
  const auto e = cloud(static_cast<std::size_t>(state.range(0)));
  const double sigma = adaptive_bandwidth(e);
  const auto spec = make_grid(e, sigma, 64);
  const auto sel = every_other(e.size());
  for (auto _ : state) benchmark::DoNotOptimize(kde_direct(e, sel, {}, sigma, spec));
}

void kde_direct_serial(benchmark::State& state) {
  const auto e = cloud(static_cast<std::size_t>(state.range(0)));
  const double sigma = adaptive_bandwidth(e);
  const auto spec = make_grid(e, sigma, 64);
  const auto sel = every_other(e.size());
  for (auto _ : state) benchmark::DoNotOptimize(reference::kde_direct(e, sel, {}, sigma, spec));
}

struct Region {
  Embedding embedding;
  DensityGrid grid;
  double threshold = 0.0;
  std::vector<Polygon> polygons;
};

Region region(std::size_t n) {
  Region r;
  r.embedding = cloud(n);
  const double sigma = adaptive_bandwidth(r.embedding);
  r.grid = kde_grid(r.embedding, every_other(n), {}, sigma, make_grid(r.embedding, sigma, 128));
  r.threshold = 0.25 * r.grid.max();
  r.polygons = trace_contours(r.grid, r.threshold);
  return r;
}

void members_fast(benchmark::State& state) {
  const auto r = region(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(resolve_members(r.polygons, r.embedding, &r.grid, r.threshold));
}

void members_serial(benchmark::State& state) {
  const auto r = region(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(reference::resolve_members(r.polygons, r.embedding));
}

std::vector<RegionAnnotation> random_groups(std::size_t count) {
  SplitMix rng(7);
  std::vector<RegionAnnotation> out(count);
  for (auto& a : out) {
    a.shape.members = SampleSet(5000);
    const std::size_t start = rng.below(5000);
    for (std::size_t i = 0; i < 200; ++i) a.shape.members.insert((start + i * 7) % 5000);
  }
  return out;
}

void graph_parallel(benchmark::State& state) {
  const auto g = random_groups(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(build_overlap_graph(g, 0.05));
}

void graph_serial(benchmark::State& state) {
  const auto g = random_groups(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(reference::build_overlap_graph(g, 0.05));
}

}  // namespace

BENCHMARK(knn_buckets)->Arg(2000)->Arg(8000)->Unit(benchmark::kMillisecond);
BENCHMARK(knn_exhaustive)->Arg(2000)->Arg(8000)->Unit(benchmark::kMillisecond);
BENCHMARK(kde_engine<KdeMethod::fft>)->Arg(10000)->Arg(40000)->Unit(benchmark::kMillisecond);
BENCHMARK(kde_engine<KdeMethod::truncated>)->Arg(10000)->Arg(40000)->Unit(benchmark::kMillisecond);
BENCHMARK(kde_direct_parallel)->Arg(2000)->Unit(benchmark::kMillisecond);
BENCHMARK(kde_direct_serial)->Arg(2000)->Unit(benchmark::kMillisecond);
BENCHMARK(members_fast)->Arg(10000)->Arg(40000)->Unit(benchmark::kMillisecond);
BENCHMARK(members_serial)->Arg(10000)->Arg(40000)->Unit(benchmark::kMillisecond);
BENCHMARK(graph_parallel)->Arg(100)->Arg(400)->Unit(benchmark::kMillisecond);
BENCHMARK(graph_serial)->Arg(100)->Arg(400)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
