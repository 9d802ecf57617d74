#include <benchmark/benchmark.h>

#include "hetnet/baselines.hpp"
#include "hetnet/ora.hpp"
#include "hetnet/rhm.hpp"

namespace {

hetnet::ScenarioConfig config_for(int n_users) {
    hetnet::ScenarioConfig c;
    c.n_users = n_users;
    c.total_bandwidth = 15e6 * n_users / 300.0;
    return c;
}

void bm_association(benchmark::State& state) {
    const auto c = config_for(static_cast<int>(state.range(0)));
    const auto s = hetnet::generate_scenario(c);
    const auto b = hetnet::sbs_bid_matrix(s);
    for (auto _ : state) {
        benchmark::DoNotOptimize(hetnet::hua_associate(s, b));
    }
    state.SetComplexityN(state.range(0));
}
BENCHMARK(bm_association)->RangeMultiplier(4)->Range(64, 4096)->Complexity();

void bm_allocation_direct(benchmark::State& state) {
    const auto c = config_for(static_cast<int>(state.range(0)));
    const auto s = hetnet::generate_scenario(c);
    const auto b = hetnet::sbs_bid_matrix(s);
    const auto assoc = hetnet::hua_associate(s, b);
    const auto pb = hetnet::make_cra_problem(s, b, assoc);
    for (auto _ : state) {
        benchmark::DoNotOptimize(hetnet::cra_solve_direct(pb));
    }
}
BENCHMARK(bm_allocation_direct)->RangeMultiplier(4)->Range(64, 1024);

void bm_allocation_dual(benchmark::State& state) {
    const auto c = config_for(static_cast<int>(state.range(0)));
    const auto s = hetnet::generate_scenario(c);
    const auto b = hetnet::sbs_bid_matrix(s);
    const auto assoc = hetnet::hua_associate(s, b);
    const auto pb = hetnet::make_cra_problem(s, b, assoc);
    hetnet::DualAscentOptions opts;
    opts.record_trace = false;
    for (auto _ : state) {
        benchmark::DoNotOptimize(hetnet::cra_solve_dual_ascent(pb, opts));
    }
}
BENCHMARK(bm_allocation_dual)->RangeMultiplier(4)->Range(64, 1024);

void bm_exact_enumeration(benchmark::State& state) {
    const auto c = config_for(static_cast<int>(state.range(0)));
    const auto s = hetnet::generate_scenario(c);
    const auto b = hetnet::sbs_bid_matrix(s);
    for (auto _ : state) {
        benchmark::DoNotOptimize(hetnet::solve_ora_exact(s, b));
    }
}
BENCHMARK(bm_exact_enumeration)->DenseRange(10, 14, 2)->Unit(benchmark::kMillisecond);

void bm_dsm(benchmark::State& state) {
    const auto c = config_for(static_cast<int>(state.range(0)));
    const auto s = hetnet::generate_scenario(c);
    const auto b = hetnet::sbs_bid_matrix(s);
    for (auto _ : state) {
        benchmark::DoNotOptimize(hetnet::solve_dsm(s, b));
    }
}
BENCHMARK(bm_dsm)->RangeMultiplier(4)->Range(64, 1024);

}  // namespace

BENCHMARK_MAIN();
