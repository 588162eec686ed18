// Microbenchmarks for the per-image hot paths.

#include <benchmark/benchmark.h>

#include <filesystem>
#include <random>
#include <vector>

#include "quakescore/adjudication.hpp"
#include "quakescore/codec.hpp"
#include "quakescore/metrics.hpp"
#include "quakescore/severity.hpp"

namespace qs = quakescore;

namespace {

qs::SegMask make_mask(std::size_t side, unsigned seed) {
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<int> cls(0, 3);
  std::vector<qs::DamageClass> v(side * side);
  for (auto& c : v) c = static_cast<qs::DamageClass>(cls(rng));
  return qs::SegMask(side, side, std::move(v));
}

qs::DepthMap make_depth(std::size_t side, unsigned seed) {
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<int> u(0, 65535);
  std::vector<double> v(side * side);
  for (auto& x : v) x = u(rng);
  return qs::DepthMap(side, side, std::move(v));
}

void BM_ScoreImage(benchmark::State& state) {
  const auto side = static_cast<std::size_t>(state.range(0));
  const auto mask = make_mask(side, 1);
  const auto depth = make_depth(side, 2);
  for (auto _ : state) benchmark::DoNotOptimize(qs::score_image(mask, depth).value);
  state.SetItemsProcessed(state.iterations() * static_cast<int64_t>(side * side));
}
BENCHMARK(BM_ScoreImage)->Arg(128)->Arg(512);

void BM_MeanIou(benchmark::State& state) {
  const auto side = static_cast<std::size_t>(state.range(0));
  const auto gt = make_mask(side, 3);
  const auto pred = make_mask(side, 4);
  for (auto _ : state) benchmark::DoNotOptimize(qs::mean_iou(gt, pred).mean);
  state.SetItemsProcessed(state.iterations() * static_cast<int64_t>(side * side));
}
BENCHMARK(BM_MeanIou)->Arg(128)->Arg(512);

void BM_MergeConservative(benchmark::State& state) {
  const auto side = static_cast<std::size_t>(state.range(0));
  const auto a = make_mask(side, 5);
  const auto b = make_mask(side, 6);
  for (auto _ : state) benchmark::DoNotOptimize(qs::merge_conservative(a, b));
  state.SetItemsProcessed(state.iterations() * static_cast<int64_t>(side * side));
}
BENCHMARK(BM_MergeConservative)->Arg(512);

void BM_MaskRoundTrip(benchmark::State& state) {
  const auto mask = make_mask(512, 7);
  const auto path = std::filesystem::temp_directory_path() / "quakescore-bench-mask.png";
  for (auto _ : state) {
    qs::save_mask(mask, path);
    benchmark::DoNotOptimize(qs::load_mask(path));
  }
  std::filesystem::remove(path);
}
BENCHMARK(BM_MaskRoundTrip)->Unit(benchmark::kMillisecond);

void BM_DepthRoundTrip(benchmark::State& state) {
  const auto depth = make_depth(512, 8);
  const auto path = std::filesystem::temp_directory_path() / "quakescore-bench-depth.png";
  for (auto _ : state) {
    qs::save_depth(depth, path);
    benchmark::DoNotOptimize(qs::load_depth(path));
  }
  std::filesystem::remove(path);
}
BENCHMARK(BM_DepthRoundTrip)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
