#include "aklt/eigensolve.hpp"
#include "aklt/hamiltonian.hpp"

#include <benchmark/benchmark.h>

#include <random>

using namespace aklt;

namespace {

std::vector<double> random_vector(std::size_t n) {
  std::mt19937_64 rng(1);
  std::normal_distribution<double> dist;
  std::vector<double> v(n);
  for (auto& x : v) x = dist(rng);
  return v;
}

const SectorHamiltonian& path_hamiltonian(int K, bool explicit_matrix) {
  static std::map<std::pair<int, bool>, std::unique_ptr<SectorHamiltonian>> cache;
  auto& slot = cache[{K, explicit_matrix}];
  if (!slot) {
    AssembleOptions opts;
    opts.explicit_cutoff = explicit_matrix ? std::size_t{1} << 40 : 0;
    slot = std::make_unique<SectorHamiltonian>(
        assemble(subsystem(SubsystemKind::C, K), SpinValue(3), 3, K % 2, opts));
  }
  return *slot;
}

void BM_MatvecMatrixFree(benchmark::State& state) {
  const auto& h = path_hamiltonian(static_cast<int>(state.range(0)), false);
  const auto x = random_vector(h.dim());
  std::vector<double> y(h.dim());
  for (auto _ : state) {
    h.apply_matrix_free(x, y);
    benchmark::DoNotOptimize(y.data());
  }
  state.counters["dim"] = static_cast<double>(h.dim());
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(h.dim()));
}
BENCHMARK(BM_MatvecMatrixFree)->Arg(8)->Arg(10)->Arg(12)->Unit(benchmark::kMillisecond);

void BM_MatvecExplicit(benchmark::State& state) {
  const auto& h = path_hamiltonian(static_cast<int>(state.range(0)), true);
  const auto x = random_vector(h.dim());
  std::vector<double> y(h.dim());
  for (auto _ : state) {
    h.apply_explicit(x, y);
    benchmark::DoNotOptimize(y.data());
  }
  state.counters["dim"] = static_cast<double>(h.dim());
}
BENCHMARK(BM_MatvecExplicit)->Arg(8)->Arg(10)->Unit(benchmark::kMillisecond);

void BM_Ranking(benchmark::State& state) {
  const SectorBasis b(static_cast<int>(state.range(0)), SpinValue(3), 0);
  std::size_t i = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(b.rank(b.state(i)));
    i = (i * 2654435761u + 1) % b.size();
  }
}
BENCHMARK(BM_Ranking)->Arg(8)->Arg(12);

void BM_BinarySearch(benchmark::State& state) {
  const SectorBasis b(static_cast<int>(state.range(0)), SpinValue(3), 0);
  std::size_t i = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(b.search(b.state(i)));
    i = (i * 2654435761u + 1) % b.size();
  }
}
BENCHMARK(BM_BinarySearch)->Arg(8)->Arg(12);

void BM_SectorEnumeration(benchmark::State& state) {
  for (auto _ : state) {
    SectorBasis b(static_cast<int>(state.range(0)), SpinValue(3), 0);
    benchmark::DoNotOptimize(b.size());
  }
}
BENCHMARK(BM_SectorEnumeration)->Arg(8)->Arg(10)->Unit(benchmark::kMillisecond);

void BM_GapLanczos(benchmark::State& state) {
  const auto g = subsystem(SubsystemKind::C, static_cast<int>(state.range(0)));
  GapOptions opts;
  opts.solver = SolverChoice::lanczos;
  opts.kernel_probe_max_dim = 0;
  opts.ground_energy = false;
  for (auto _ : state) {
    auto r = spectral_gap(g, SpinValue(3), 3, GapStrategy::minimal_sz, opts);
    benchmark::DoNotOptimize(r.gap);
  }
}
BENCHMARK(BM_GapLanczos)->Arg(6)->Arg(8)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
