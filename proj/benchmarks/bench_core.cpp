#include <benchmark/benchmark.h>

#include "confham/dynamics.hpp"
#include "confham/hamiltonian.hpp"
#include "confham/observables.hpp"
#include "confham/quantum.hpp"

using namespace confham;

namespace {

ModelParams generic(int n) {
    ModelParams m;
    m.n = n;
    m.k = 2.0;
    m.s = 1.0;
    m.gamma = 0.5;
    m.central_sign = +1;
    m.omegas.assign(n, 1.0);
    m.alphas.assign(n, 0.3);
    return m;
}

PhaseState point(int n) {
    PhaseState st;
    st.x.assign(n, 1.1);
    st.p.assign(n, 0.2);
    return st;
}

void BM_EvalHamiltonian(benchmark::State& state) {
    auto m = generic(static_cast<int>(state.range(0)));
    auto st = point(m.n);
    for (auto _ : state) benchmark::DoNotOptimize(eval_hamiltonian(m, st));
}
BENCHMARK(BM_EvalHamiltonian)->Arg(2)->Arg(3)->Arg(8);

void BM_GradHamiltonian(benchmark::State& state) {
    auto m = generic(static_cast<int>(state.range(0)));
    auto st = point(m.n);
    for (auto _ : state) benchmark::DoNotOptimize(grad_hamiltonian(m, st));
}
BENCHMARK(BM_GradHamiltonian)->Arg(2)->Arg(3)->Arg(8);

void BM_MidpointStep(benchmark::State& state) {
    auto m = generic(2);
    auto st = point(2);
    for (auto _ : state) benchmark::DoNotOptimize(dynamics::step_implicit_midpoint(m, st, 1e-3));
}
BENCHMARK(BM_MidpointStep);

void BM_PoissonBracket(benchmark::State& state) {
    auto m = generic(3);
    auto st = point(3);
    auto h = observables::hamiltonian_observable(m);
    auto k12 = observables::angular_rosochatius_observable(0, 1, m);
    for (auto _ : state) benchmark::DoNotOptimize(observables::poisson_bracket(*h, *k12, st));
}
BENCHMARK(BM_PoissonBracket);

void BM_BuildOperator2D(benchmark::State& state) {
    ModelParams m = generic(2);
    m.k = 1.0;
    m.alphas = {0.0, 0.0};
    m.gamma = 0.0;
    quantum::GridSpec g;
    g.n = 2;
    g.box = {{-8.0, 8.0}, {-8.0, 8.0}};
    int pts = static_cast<int>(state.range(0));
    g.points = {pts, pts};
    for (auto _ : state) benchmark::DoNotOptimize(quantum::build_weighted_operator(m, g));
}
BENCHMARK(BM_BuildOperator2D)->Arg(61)->Arg(121);

}  // namespace

BENCHMARK_MAIN();
