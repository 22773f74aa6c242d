#include <benchmark/benchmark.h>

#include <cmath>
#include <numeric>
#include <random>

#include "chainglue/compose.hpp"
#include "chainglue/excursion.hpp"
#include "chainglue/simulate.hpp"

namespace {

using namespace chainglue;

ChainModel random_chain(std::mt19937_64& gen, Index n) {
  std::uniform_real_distribution<double> log_rate(std::log(0.1), std::log(10.0));
  std::bernoulli_distribution edge(0.3);
  std::vector<Index> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), Index{0});
  std::shuffle(order.begin(), order.end(), gen);
  Matrix q = Matrix::Zero(n, n);
  for (std::size_t k = 0; k < order.size(); ++k) {
    q(order[k], order[(k + 1) % order.size()]) = std::exp(log_rate(gen));
  }
  for (Index i = 0; i < n; ++i) {
    for (Index j = 0; j < n; ++j) {
      if (i != j && q(i, j) == 0.0 && edge(gen)) q(i, j) = std::exp(log_rate(gen));
    }
  }
  return make_model(RateMatrix::from_rates(q).dense());
}

struct Pair {
  ChainModel a, b;
  GlueSpec spec;
};

Pair make_pair(Index n) {
  std::mt19937_64 gen(static_cast<std::uint64_t>(n));
  return {random_chain(gen, n), random_chain(gen, n), GlueSpec{{{0, 0}, {1, 1}}, {}}};
}

void BM_GlueDirect(benchmark::State& state) {
  const Pair p = make_pair(state.range(0));
  for (auto _ : state) {
    const GluedChain g = glue_two(p.a, p.b, p.spec);
    benchmark::DoNotOptimize(stationary_direct(g.model));
  }
}
BENCHMARK(BM_GlueDirect)->RangeMultiplier(4)->Range(4, 256);

void BM_GluePipeline(benchmark::State& state) {
  const Pair p = make_pair(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(stationary_pipeline(p.a, p.b, p.spec));
}
BENCHMARK(BM_GluePipeline)->RangeMultiplier(4)->Range(4, 256);

// With both excursion profiles cached, recombining costs O(r + s).
void BM_GlueFromProfiles(benchmark::State& state) {
  const Pair p = make_pair(state.range(0));
  const GlueLayout layout = make_layout(p.a.size(), p.b.size(), p.spec);
  const auto pa = excursion_profile(MarkedChain(p.a, 0, 1));
  const auto pb = excursion_profile(MarkedChain(p.b, 0, 1));
  for (auto _ : state) benchmark::DoNotOptimize(stationary_glue_two(pa, pb, layout));
}
BENCHMARK(BM_GlueFromProfiles)->RangeMultiplier(4)->Range(4, 256);

void BM_ExcursionProfile(benchmark::State& state) {
  const Pair p = make_pair(state.range(0));
  const MarkedChain mc(p.a, 0, 1);
  for (auto _ : state) benchmark::DoNotOptimize(excursion_profile(mc));
}
BENCHMARK(BM_ExcursionProfile)->RangeMultiplier(4)->Range(4, 256);

void BM_SimulatePath(benchmark::State& state) {
  const Pair p = make_pair(16);
  const auto jumps = static_cast<std::size_t>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(simulate_path(p.a, 0, jumps, 1));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_SimulatePath)->Arg(100000);

}  // namespace

BENCHMARK_MAIN();
