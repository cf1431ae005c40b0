#include <benchmark/benchmark.h>

#include <cmath>

#include "ecolotrade/nestedness.hpp"
#include "ecolotrade/null_models.hpp"

using namespace ecolotrade;

namespace {

BinaryMatrix bench_matrix(std::size_t R, std::size_t C, double fill, std::uint64_t seed) {
    return random_matrix(R, C, fill, seed);
}

void BM_Temperature(benchmark::State& state) {
    const auto n = static_cast<std::size_t>(state.range(0));
    const BinaryMatrix q = bench_matrix(n, n, 0.2, 1);
    const Ordering id = Ordering::identity(n, n);
    for (auto _ : state) benchmark::DoNotOptimize(temperature(q, id).temperature);
    state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_Temperature)->Arg(20)->Arg(60)->Arg(120)->Complexity();

void BM_Pack(benchmark::State& state) {
    const auto n = static_cast<std::size_t>(state.range(0));
    const BinaryMatrix q = bench_matrix(n, n, 0.2, 2);
    for (auto _ : state) benchmark::DoNotOptimize(pack(q, fast_null_budget(), 7).temperature);
}
BENCHMARK(BM_Pack)->Arg(10)->Arg(20)->Arg(40)->Unit(benchmark::kMillisecond);

void BM_NullEnsemble(benchmark::State& state) {
    for (auto _ : state) {
        auto s = null_ensemble(20, 20, 0.2, static_cast<int>(state.range(0)),
                               fast_null_budget(), 3);
        benchmark::DoNotOptimize(s.mean);
    }
}
BENCHMARK(BM_NullEnsemble)->Arg(4)->Arg(16)->Unit(benchmark::kMillisecond);

} // namespace

BENCHMARK_MAIN();
