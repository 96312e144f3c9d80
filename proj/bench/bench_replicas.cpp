// Serial reference path against the OpenMP replica kernel.
// Run with --benchmark_filter=... ; arg is the worker count (1 = serial path).
#include <benchmark/benchmark.h>

#include "slfv/ancestral.hpp"
#include "slfv/percolation.hpp"
#include "slfv/replicas.hpp"
#include "slfv/twocolumn.hpp"

namespace {

void BM_dual_hits(benchmark::State& st) {
    const int workers = static_cast<int>(st.range(0));
    const slfv::ShapeLaw law = slfv::ShapeLaw::unit_rate(1.0, 1.0);
    for (auto _ : st) {
        auto r = slfv::run_replicas(32, 7, workers, [&](std::size_t, std::uint64_t s) {
            return slfv::hit_levels(law, {10.0, 20.0}, s);
        });
        benchmark::DoNotOptimize(r.data());
    }
    st.SetItemsProcessed(st.iterations() * 32);
}

void BM_fpp(benchmark::State& st) {
    const int workers = static_cast<int>(st.range(0));
    for (auto _ : st) {
        auto r = slfv::run_replicas(64, 7, workers,
                                    [](std::size_t, std::uint64_t s) { return slfv::fpp_hit(16, 0, s); });
        benchmark::DoNotOptimize(r.data());
    }
    st.SetItemsProcessed(st.iterations() * 64);
}

void BM_twocol_returns(benchmark::State& st) {
    const int workers = static_cast<int>(st.range(0));
    for (auto _ : st) {
        auto r = slfv::run_replicas(100000, 7, workers,
                                    [](std::size_t, std::uint64_t s) { return slfv::twocol::simulate_return(s); });
        benchmark::DoNotOptimize(r.data());
    }
    st.SetItemsProcessed(st.iterations() * 100000);
}

}  // namespace

BENCHMARK(BM_dual_hits)->Arg(1)->Arg(2)->Arg(4)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_fpp)->Arg(1)->Arg(2)->Arg(4)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_twocol_returns)->Arg(1)->Arg(2)->Arg(4)->Unit(benchmark::kMillisecond)->UseRealTime();

BENCHMARK_MAIN();
