#include <benchmark/benchmark.h>

#include <random>

#include "agc/kmeans.hpp"
#include "agc/losses.hpp"
#include "agc/metrics.hpp"
#include "agc/sbm.hpp"
#include "agc/smoothing.hpp"

namespace {

agc::SbmSpec spec_for(std::int64_t nodes_per_block, std::int64_t blocks) {
  agc::SbmSpec spec;
  spec.block_sizes.assign(blocks, nodes_per_block);
  const double n = static_cast<double>(nodes_per_block);
  spec.p_in = std::min(1.0, 8.0 / n);  // ~8 intra neighbors
  spec.p_out = std::min(1.0, 2.0 / (n * (blocks - 1)));
  spec.seed = 1;
  return spec;
}

void BM_GenerateSbm(benchmark::State& state) {
  const auto spec = spec_for(state.range(0), 4);
  for (auto _ : state) {
    auto [g, labels] = agc::generate_sbm(spec);
    benchmark::DoNotOptimize(g.col_idx.data());
  }
}
BENCHMARK(BM_GenerateSbm)->Arg(1000)->Arg(10000)->Arg(50000)->Unit(benchmark::kMillisecond);

void BM_SsgcSmooth(benchmark::State& state) {
  const auto spec = spec_for(state.range(0), 4);
  auto [g, labels] = agc::generate_sbm(spec);
  auto x = agc::gaussian_features(g.num_nodes, 32, 2);
  agc::SmoothingConfig cfg{4, 0.05, true, agc::SmoothingVariant::ssgc_average};
  for (auto _ : state) {
    auto z = agc::ssgc_smooth(g, x, cfg);
    benchmark::DoNotOptimize(z.data.data());
  }
}
BENCHMARK(BM_SsgcSmooth)->Arg(1000)->Arg(10000)->Arg(50000)->Unit(benchmark::kMillisecond);

void BM_KMeans(benchmark::State& state) {
  auto x = agc::gaussian_features(static_cast<std::uint64_t>(state.range(0)), 32, 3);
  agc::KMeansConfig cfg;
  cfg.k = 8;
  cfg.max_iters = 20;
  for (auto _ : state) {
    auto res = agc::kmeans_fit(x, cfg);
    benchmark::DoNotOptimize(res.inertia);
  }
}
BENCHMARK(BM_KMeans)->Arg(4000)->Arg(40000)->Unit(benchmark::kMillisecond);

void BM_DmonLossGrad(benchmark::State& state) {
  const auto spec = spec_for(state.range(0), 4);
  auto [g, labels] = agc::generate_sbm(spec);
  std::mt19937_64 rng(4);
  std::uniform_real_distribution<double> unif(0.1, 1.0);
  agc::SoftAssignment c;
  c.probs = agc::DenseMatrix<double>(g.num_nodes, 4);
  for (std::size_t i = 0; i < c.n(); ++i) {
    double sum = 0.0;
    for (std::size_t j = 0; j < 4; ++j) sum += (c.probs.at(i, j) = unif(rng));
    for (std::size_t j = 0; j < 4; ++j) c.probs.at(i, j) /= sum;
  }
  for (auto _ : state) {
    auto grad = agc::dmon_loss_grad(c, g);
    benchmark::DoNotOptimize(grad.data.data());
  }
}
BENCHMARK(BM_DmonLossGrad)->Arg(1000)->Arg(10000)->Unit(benchmark::kMillisecond);

void BM_Modularity(benchmark::State& state) {
  const auto spec = spec_for(state.range(0), 4);
  auto [g, labels] = agc::generate_sbm(spec);
  agc::HardAssignment pred{labels.labels, labels.k_true};
  for (auto _ : state) {
    benchmark::DoNotOptimize(agc::modularity(g, pred));
  }
}
BENCHMARK(BM_Modularity)->Arg(10000)->Arg(100000)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
