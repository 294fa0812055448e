// Serial reference vs OpenMP kernels. Arguments are the number of sites.

#include <benchmark/benchmark.h>

#include <thread>

#include "fcs/gauge_algebra.hpp"
#include "fcs/kernels.hpp"
#include "fcs/markov_extension.hpp"
#include "fcs/models.hpp"
#include "fcs/random.hpp"

using namespace fcs;

namespace {

const FCState& bench_state() {
    static const FCState s = [] {
        Rng rng(101);
        return models::with_invariant_state(models::random_unital_map(rng, 2, 3));
    }();
    return s;
}

Matrix input(Index dim) {
    Rng rng(202);
    return random_density(rng, dim);
}

template <Matrix (*Step)(const DualOperators&, const Matrix&)>
void bm_step(benchmark::State& state) {
    const DualOperators ops(bench_state().map);
    const Matrix x = input(Index{1} << state.range(0));
    for (auto _ : state) benchmark::DoNotOptimize(Step(ops, x));
}

template <Matrix (*Twirl)(const std::vector<Matrix>&, const Matrix&)>
void bm_twirl(benchmark::State& state) {
    const GaugeGroup g = group_closure(2, {pauli::x(), pauli::z()});
    std::vector<Matrix> powers;
    for (const Matrix& u : g.elements()) powers.push_back(kron_power(u, static_cast<std::size_t>(state.range(0))));
    const Matrix x = input(Index{1} << state.range(0));
    for (auto _ : state) benchmark::DoNotOptimize(Twirl(powers, x));
}

template <ChainSweep (*Sweep)(const ChainLetters&, const ChainSweepOptions&)>
void bm_chain(benchmark::State& state) {
    const ExtendedChain x = build_extension(bench_state());
    ChainSweepOptions opt;
    opt.depth = state.range(0);
    for (auto _ : state) benchmark::DoNotOptimize(Sweep(x.letters, opt));
}

void bm_conditional(benchmark::State& state) {
    // range(1) == 0 means all hardware threads
    const int all = static_cast<int>(std::thread::hardware_concurrency());
    set_thread_count(state.range(1) > 0 ? static_cast<int>(state.range(1)) : all);
    const ExtendedChain x = build_extension(bench_state());
    for (auto _ : state) benchmark::DoNotOptimize(conditional_sweep(x, state.range(0), ConditionalTarget::Sites));
    set_thread_count(all);
}

}  // namespace

BENCHMARK(bm_step<serial::dual_step>)->Name("dual_step/serial")->DenseRange(2, 5);
BENCHMARK(bm_step<parallel::dual_step>)->Name("dual_step/parallel")->DenseRange(2, 5);
BENCHMARK(bm_step<serial::site_step>)->Name("site_step/serial")->DenseRange(2, 5);
BENCHMARK(bm_step<parallel::site_step>)->Name("site_step/parallel")->DenseRange(2, 5);
BENCHMARK(bm_twirl<serial::twirl>)->Name("twirl/serial")->DenseRange(2, 6, 2);
BENCHMARK(bm_twirl<parallel::twirl>)->Name("twirl/parallel")->DenseRange(2, 6, 2);
BENCHMARK(bm_chain<serial::chain_sweep>)->Name("chain_sweep/serial")->DenseRange(2, 5);
BENCHMARK(bm_chain<parallel::chain_sweep>)->Name("chain_sweep/parallel")->DenseRange(2, 5);
BENCHMARK(bm_conditional)->Name("conditional_sweep")->ArgsProduct({{2, 3}, {1, 0}});

BENCHMARK_MAIN();
