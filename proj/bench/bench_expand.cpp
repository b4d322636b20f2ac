// Level expansion: OpenMP kernel against the serial reference.

#include <benchmark/benchmark.h>
#include <omp.h>

#include <map>

#include "cdt/enumerate.hpp"

using namespace cdt;

namespace {

// Levels 0..n-1 of the three-axiom implication/negation base.
const LevelTable& base_levels(GeneratorKind kind, std::size_t n) {
  static std::map<std::pair<int, std::size_t>, LevelTable> memo;
  auto& table = memo[{static_cast<int>(kind), n}];
  if (table.empty()) {
    SymbolTable st;
    const AxiomBase axioms = AxiomBase::from_polish({"CCpqCCqrCpr", "CCNppp", "CpCNpq"}, st);
    for (std::size_t l = 0; l < n; ++l) {
      Generator gen(kind, axioms, &table);
      table.push_back(gen.level(l));
    }
  }
  return table;
}

void BM_Serial(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const LevelTable& cache = base_levels(GeneratorKind::TreeSize, n);
  std::size_t produced = 0;
  for (auto _ : state) produced = expand_level_serial(GeneratorKind::TreeSize, n, cache).size();
  state.counters["solutions"] = static_cast<double>(produced);
}

void BM_Parallel(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const LevelTable& cache = base_levels(GeneratorKind::TreeSize, n);
  std::size_t produced = 0;
  for (auto _ : state) produced = expand_level(GeneratorKind::TreeSize, n, cache).size();
  state.counters["solutions"] = static_cast<double>(produced);
  state.counters["threads"] = omp_get_max_threads();
}

BENCHMARK(BM_Serial)->DenseRange(4, 6)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_Parallel)->DenseRange(4, 6)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
