// Serial reference against the OpenMP path for the three parallel kernels.

#include <random>

#include <benchmark/benchmark.h>

#include "sfs/domains.hpp"
#include "sfs/fem2d.hpp"
#include "sfs/tridiagonal.hpp"

using namespace sfs;

namespace {

Exec mode(const benchmark::State& state) { return state.range(0) ? Exec::Parallel : Exec::Serial; }

void label(benchmark::State& state) { state.SetLabel(state.range(0) ? "parallel" : "serial"); }

SymTridiagonal random_tridiagonal(int n) {
    std::mt19937_64 rng(1);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    SymTridiagonal t;
    for (int i = 0; i < n; ++i) t.diag.push_back(u(rng));
    for (int i = 1; i < n; ++i) t.off.push_back(u(rng));
    return t;
}

void BM_Bisection(benchmark::State& state) {
    const SymTridiagonal t = random_tridiagonal(4096);
    for (auto _ : state) benchmark::DoNotOptimize(bisect_eigenvalues(t, 0, 64, 1e-12, mode(state)));
    label(state);
}

void BM_DomainQuadrature(benchmark::State& state) {
    std::mt19937_64 rng(2);
    const DomainSpec spec = random_domain(SpaceForm::Hyperbolic, 3, Symmetry::Order4, 0.1, true, rng);
    const QuadratureGrid grid = make_grid(spec, {32, 128, 32});
    for (auto _ : state) benchmark::DoNotOptimize(volume(spec, grid, mode(state)));
    label(state);
}

void BM_FemAssembly(benchmark::State& state) {
    std::mt19937_64 rng(3);
    const DomainSpec spec = random_domain(SpaceForm::Spherical, 2, Symmetry::Order4, 0.1, true, rng);
    const PolarMesh mesh = generate_mesh(spec, 3);
    for (auto _ : state) benchmark::DoNotOptimize(assemble(mesh, spec.form, mode(state)));
    label(state);
}

}  // namespace

BENCHMARK(BM_Bisection)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_DomainQuadrature)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_FemAssembly)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
