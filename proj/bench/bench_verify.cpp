// Serial reference against the OpenMP kernels: verify over map records,
// sweep over xi.
#include <benchmark/benchmark.h>

#include "blender/family.hpp"

using namespace blender;

namespace {

HenonParams params(double lo, double hi)
{
    return {Interval(4.0), Interval::enclose("0.3"), Interval::enclose("-2.375"), Interval(lo, hi)};
}

const Certificate& cert()
{
    static const Certificate c = [] {
        TubeSettings s;
        s.eps_z = 0.1;
        s.nodes = 5;
        s.n = 5;
        return construct(make_model(params(1.5, 1.51), s));
    }();
    return c;
}

void BM_verify_serial(benchmark::State& st)
{
    const Certificate& c = cert();
    for (auto _ : st) {
        benchmark::DoNotOptimize(verify_serial(c).passed);
    }
    st.counters["records"] = static_cast<double>(c.maps.size());
}

void BM_verify_parallel(benchmark::State& st)
{
    const Certificate& c = cert();
    for (auto _ : st) {
        benchmark::DoNotOptimize(verify_parallel(c).passed);
    }
    st.counters["records"] = static_cast<double>(c.maps.size());
}

SweepSettings sweep_settings()
{
    SweepSettings s;
    s.base = params(1.0, 1.0);
    s.tube.eps_z = 0.1;
    s.tube.nodes = 5;
    s.tube.n = 5;
    return s;
}

const std::vector<double> kGrid{1.1, 1.15, 1.2, 1.25, 1.3, 1.35, 1.4};

void BM_sweep_serial(benchmark::State& st)
{
    const SweepSettings s = sweep_settings();
    for (auto _ : st) {
        benchmark::DoNotOptimize(sweep_serial(kGrid, s, false).size());
    }
}

void BM_sweep_parallel(benchmark::State& st)
{
    const SweepSettings s = sweep_settings();
    for (auto _ : st) {
        benchmark::DoNotOptimize(sweep_parallel(kGrid, s, false).size());
    }
}

} // namespace

BENCHMARK(BM_verify_serial)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_verify_parallel)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_sweep_serial)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_sweep_parallel)->Unit(benchmark::kMillisecond)->UseRealTime();

BENCHMARK_MAIN();
