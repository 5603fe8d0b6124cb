// Serial reference vs OpenMP assembly of the Gagliardo matrix.
// Thread counts above nproc are still run; expect no speedup there.

#include "mixnl/assembly.hpp"
#include "mixnl/parallel.hpp"

#include <benchmark/benchmark.h>

using namespace mixnl;

namespace {

const SpectralMeasure& measure()
{
  static const SpectralMeasure mu = SpectralMeasure::from_atoms({{0.25, 1.0}, {0.5, 1.0}, {0.75, 1.0}});
  return mu;
}

void BM_serial(benchmark::State& state)
{
  const int n = static_cast<int>(state.range(0));
  const Mesh1D mesh = build_mesh({-1.0, 1.0}, 8.0, n, n / 4);
  for (auto _ : state)
    benchmark::DoNotOptimize(assemble_gagliardo_serial(mesh, measure()));
  state.counters["nodes"] = mesh.num_nodes();
}

void BM_openmp(benchmark::State& state)
{
  const int n = static_cast<int>(state.range(0));
  set_thread_count(static_cast<int>(state.range(1)));
  const Mesh1D mesh = build_mesh({-1.0, 1.0}, 8.0, n, n / 4);
  for (auto _ : state)
    benchmark::DoNotOptimize(assemble_gagliardo(mesh, measure()));
  set_thread_count(0);
  state.counters["nodes"] = mesh.num_nodes();
  state.counters["threads"] = static_cast<double>(state.range(1));
}

} // namespace

BENCHMARK(BM_serial)->Arg(64)->Arg(128)->Arg(256)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_openmp)
    ->ArgsProduct({{64, 128, 256}, {1, 2, 4}})
    ->UseRealTime()
    ->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
