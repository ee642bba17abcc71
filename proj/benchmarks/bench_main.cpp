// Microbenchmarks for the hot paths: propagator construction, weak-value
// trajectories, conditional evolution, and the exact two-body oracle.

#include <cmath>

#include <benchmark/benchmark.h>

#include "wvlab/oracle.hpp"
#include "wvlab/weak_potential.hpp"
#include "wvlab/weak_value.hpp"

using namespace wvlab;

namespace {

constexpr double kPi = 3.14159265358979323846;

PrePostPair gaussian_pair(const FockSpace& space, double x0) {
    return PrePostPair(coherent_state(space, x0 / std::sqrt(2.0)),
                       coherent_state(space, -x0 / std::sqrt(2.0)),
                       oscillator_hamiltonian(space));
}

void BM_FreePropagatorBuild(benchmark::State& state) {
    const FockSpace space(static_cast<int>(state.range(0)));
    auto h = oscillator_hamiltonian(space);
    for (auto _ : state) {
        FreePropagator prop(h);
        benchmark::DoNotOptimize(prop);
    }
}
BENCHMARK(BM_FreePropagatorBuild)->Arg(20)->Arg(40)->Arg(80);

void BM_WeakTrajectory(benchmark::State& state) {
    const FockSpace space(40);
    auto pair = gaussian_pair(space, 2.0);
    std::vector<OperatorMatrix> ops{position_op(space), momentum_op(space)};
    auto grid = uniform_grid(0.0, 2.0 * kPi, static_cast<int>(state.range(0)));
    for (auto _ : state) {
        auto series = weak_trajectory(pair, ops, grid);
        benchmark::DoNotOptimize(series);
    }
}
BENCHMARK(BM_WeakTrajectory)->Arg(64)->Arg(256)->Arg(1024);

void BM_ConditionalFirstOrder(benchmark::State& state) {
    const FockSpace space(static_cast<int>(state.range(0)));
    auto pair = gaussian_pair(space, 2.0);
    auto p = momentum_op(space);
    SeparableInteraction v({{p, p}}, 1e-2,
                           TemporalProfile::gaussian_window(0.0, 2.0 * kPi, kPi, 0.1257));
    auto h = oscillator_hamiltonian(space);
    auto phi0 = momentum_profile_state(space);
    auto grid = uniform_grid(0.0, 2.0 * kPi, 256);
    for (auto _ : state) {
        auto phi = conditional_evolve_first_order(phi0, pair, h, v, grid);
        benchmark::DoNotOptimize(phi);
    }
}
BENCHMARK(BM_ConditionalFirstOrder)->Arg(32)->Arg(40);

void BM_ConditionalSecondOrder(benchmark::State& state) {
    const FockSpace space(12);
    auto pre = superposition(space, {{0, 1.0}, {1, Complex(0.0, -1.0)}, {2, 1.0}});
    auto post = superposition(space, {{0, 1.0}, {1, 1.0}, {2, -1.0}});
    PrePostPair pair(pre, post, oscillator_hamiltonian(space));
    auto x = position_op(space);
    SeparableInteraction v({{x, x}}, 2e-3, TemporalProfile::uniform(0.0, 2.0 * kPi));
    auto h = oscillator_hamiltonian(space);
    auto phi0 = superposition(space, {{0, 1.0}});
    auto grid = uniform_grid(0.0, 2.0 * kPi, static_cast<int>(state.range(0)));
    for (auto _ : state) {
        auto phi = conditional_evolve_second_order(phi0, pair, h, v, grid);
        benchmark::DoNotOptimize(phi);
    }
}
BENCHMARK(BM_ConditionalSecondOrder)->Arg(128)->Arg(256)->Arg(512);

void BM_OracleExact(benchmark::State& state) {
    const FockSpace space(static_cast<int>(state.range(0)));
    auto x = position_op(space);
    TwoBodySystem sys(space, space, oscillator_hamiltonian(space),
                      oscillator_hamiltonian(space),
                      SeparableInteraction({{x, x}}, 0.01,
                                           TemporalProfile::uniform(0.0, 2.0 * kPi)));
    auto psi0 = tensor_state(coherent_state(space, 0.5), superposition(space, {{0, 1.0}}));
    for (auto _ : state) {
        auto psi = evolve_exact(sys, psi0, 2.0 * kPi);
        benchmark::DoNotOptimize(psi);
    }
}
BENCHMARK(BM_OracleExact)->Arg(12)->Arg(20)->Arg(32);

} // namespace

BENCHMARK_MAIN();
