#include <benchmark/benchmark.h>

#include <cstddef>
#include <vector>

#include "spe/chain.hpp"
#include "spe/lattices.hpp"
#include "spe/loops.hpp"
#include "spe/rng.hpp"

namespace {

spe::Configuration random_configuration(const spe::BipartiteModel& model, std::size_t length, std::uint64_t seed) {
  const spe::OperatorAlphabet alphabet = spe::operator_alphabet(model);
  spe::Rng rng(seed);
  spe::Configuration c(length);
  for (auto& slot : c) slot = alphabet[rng.index(alphabet.size())];
  return c;
}

void BM_LoopCount(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const spe::BipartiteModel star = spe::lattices::star(n);
  const spe::Configuration c = random_configuration(star, 2 * n * n, 1);
  spe::LoopCounter counter(n);
  for (auto _ : state) benchmark::DoNotOptimize(counter.count(c));
  state.SetItemsProcessed(static_cast<std::int64_t>(state.iterations() * c.size()));
}
BENCHMARK(BM_LoopCount)->Arg(4)->Arg(8)->Arg(16)->Arg(32);

void BM_Decompose(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const spe::BipartiteModel star = spe::lattices::star(n);
  const spe::Configuration c = random_configuration(star, 2 * n * n, 2);
  for (auto _ : state) benchmark::DoNotOptimize(spe::decompose(star, c));
  state.SetItemsProcessed(static_cast<std::int64_t>(state.iterations() * c.size()));
}
BENCHMARK(BM_Decompose)->Arg(4)->Arg(8)->Arg(16)->Arg(32);

void BM_ChainStep(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const spe::BipartiteModel star = spe::lattices::star(n);
  spe::ChainParams params;
  params.B = static_cast<std::size_t>(state.range(1));
  params.seed = 3;
  spe::MetropolisChain chain(star, params);
  for (auto _ : state) benchmark::DoNotOptimize(chain.step());
  state.counters["acceptance"] = chain.acceptance_rate();
}
BENCHMARK(BM_ChainStep)->Args({3, 176})->Args({5, 514})->Args({16, 1000});

}  // namespace

BENCHMARK_MAIN();
