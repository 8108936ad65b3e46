#include <benchmark/benchmark.h>

#include <vector>

#include "patchsearch/components.hpp"
#include "patchsearch/enrollment.hpp"
#include "patchsearch/kmeans.hpp"
#include "patchsearch/rng.hpp"
#include "patchsearch/search.hpp"

namespace {

using namespace patchsearch;

// Query-like map: noisy background with a brighter square along channel 0.
FeatureMap synthetic_map(int n, int dim, std::uint64_t seed) {
  Rng rng(seed);
  std::vector<float> data(static_cast<std::size_t>(n) * n * dim);
  for (int r = 0; r < n; ++r) {
    for (int c = 0; c < n; ++c) {
      float* f = data.data() + (static_cast<std::size_t>(r) * n + c) * dim;
      for (int d = 0; d < dim; ++d) f[d] = static_cast<float>(rng.normal());
      if (r >= n / 4 && r < n / 2 && c >= n / 4 && c < n / 2) f[0] += 20.0f;
      f[1] += 20.0f;
    }
  }
  return FeatureMap(n, dim, std::move(data));
}

std::vector<ClassModel> models_for(const FeatureMap& fmap, int classes) {
  std::vector<ClassModel> out;
  const int n = fmap.n_patches();
  const PatchSet seg = PatchSet::from_bbox({n / 4, n / 4, n / 2 - 1, n / 2 - 1}, n);
  for (int c = 0; c < classes; ++c) out.push_back(enroll(fmap, {seg, "c", c}));
  return out;
}

void BM_KMeansPrepass(benchmark::State& state) {
  const FeatureMap fmap = synthetic_map(32, static_cast<int>(state.range(0)), 1);
  SearchConfig cfg;
  for (auto _ : state) benchmark::DoNotOptimize(query_prepass(fmap, cfg));
}
BENCHMARK(BM_KMeansPrepass)->Arg(64)->Arg(384)->Unit(benchmark::kMillisecond);

void BM_MatchPatches(benchmark::State& state) {
  const FeatureMap fmap = synthetic_map(32, static_cast<int>(state.range(0)), 2);
  const ClassModel model = models_for(fmap, 1).front();
  for (auto _ : state) benchmark::DoNotOptimize(match_patches(fmap, model));
}
BENCHMARK(BM_MatchPatches)->Arg(64)->Arg(384)->Unit(benchmark::kMicrosecond);

void BM_ConnectedComponents(benchmark::State& state) {
  Rng rng(3);
  PatchSet mask(32);
  for (std::size_t i = 0; i < mask.capacity(); ++i) {
    if (rng.uniform01() < 0.5) mask.set(i);
  }
  for (auto _ : state) benchmark::DoNotOptimize(connected_components(mask));
}
BENCHMARK(BM_ConnectedComponents)->Unit(benchmark::kMicrosecond);

void BM_SearchQuery(benchmark::State& state) {
  const FeatureMap fmap = synthetic_map(32, 384, 4);
  const auto models = models_for(fmap, 5);
  SearchConfig cfg;
  cfg.refine = state.range(0) != 0;
  for (auto _ : state) benchmark::DoNotOptimize(search_query(fmap, models, cfg));
}
BENCHMARK(BM_SearchQuery)->Arg(0)->Arg(1)->ArgName("refine")->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
