#include <benchmark/benchmark.h>

#include <cmath>
#include <complex>

#include "hsd/bvp.hpp"
#include "hsd/factorize.hpp"
#include "hsd/sobolev.hpp"
#include "hsd/solver.hpp"
#include "hsd/spectral.hpp"

using namespace hsd;

namespace {

SampledField gaussian_x(const SpectralGrid& g) {
    return sample_x(g, [](const std::vector<double>& xp, double x) {
        double r2 = (x - 3.0) * (x - 3.0);
        for (double c : xp) r2 += c * c;
        return cplx(x > 0 ? std::exp(-2.0 * r2) : 0.0);
    });
}

SymbolSpec half_shift(const SpectralGrid& g, int steps) {
    std::vector<double> zero(static_cast<std::size_t>(g.dim()), 0.0), shift = zero;
    shift.back() = steps * g.dx();
    return {DifferenceOperator(std::vector<ShiftTerm>{{1.0, zero}, {-0.5, shift}})};
}

SpectralGrid grid_for(const benchmark::State& state) {
    return SpectralGrid(static_cast<int>(state.range(0)), static_cast<int>(state.range(1)), 16.0);
}

}  // namespace

static void BM_FourierForward(benchmark::State& state) {
    const SpectralGrid g = grid_for(state);
    const SampledField u = gaussian_x(g);
    for (auto _ : state) benchmark::DoNotOptimize(fourier_forward(u));
    state.SetItemsProcessed(state.iterations() * static_cast<int64_t>(g.size()));
}
BENCHMARK(BM_FourierForward)->Args({1, 1024})->Args({1, 16384})->Args({2, 256});

static void BM_Projector(benchmark::State& state) {
    const SpectralGrid g = grid_for(state);
    const SampledField f = fourier_forward(gaussian_x(g));
    for (auto _ : state) benchmark::DoNotOptimize(projector(f, Sign::Plus));
    state.SetItemsProcessed(state.iterations() * static_cast<int64_t>(g.size()));
}
BENCHMARK(BM_Projector)->Args({1, 1024})->Args({1, 16384})->Args({2, 256});

static void BM_FactorizeOperator(benchmark::State& state) {
    const SpectralGrid g = grid_for(state);
    const SymbolSpec spec = half_shift(g, 4);
    for (auto _ : state) benchmark::DoNotOptimize(factorize(spec, g));
}
BENCHMARK(BM_FactorizeOperator)->Args({1, 1024})->Args({2, 128})->Args({2, 256});

static void BM_FactorizeRational(benchmark::State& state) {
    const SpectralGrid g = grid_for(state);
    const SymbolSpec spec{RationalPreset::quadratic_ratio(2.0, 1.0)};
    for (auto _ : state) benchmark::DoNotOptimize(factorize(spec, g));
}
BENCHMARK(BM_FactorizeRational)->Args({1, 1024})->Args({1, 4096})->Args({2, 128});

static void BM_SolveUnique(benchmark::State& state) {
    const SpectralGrid g = grid_for(state);
    const HalfSpaceProblem p(half_shift(g, 4), g);
    const SampledField v = gaussian_x(g);
    for (auto _ : state) benchmark::DoNotOptimize(solve_unique(p, v, 0.0));
}
BENCHMARK(BM_SolveUnique)->Args({1, 1024})->Args({2, 128})->Args({2, 256});

static void BM_TraceBvp(benchmark::State& state) {
    const SpectralGrid g = grid_for(state);
    const HalfSpaceProblem p({RationalPreset::omega_power(-2)}, g);
    const std::vector<cplx> ones(g.slices(), cplx(1.0));
    const TraceConditions bc{{-0.5, 0.75}, {ones, ones}, {}};
    BvpOptions opt;
    opt.solve.throw_on_failure = false;
    for (auto _ : state) benchmark::DoNotOptimize(solve_bvp_traces(p, 0.1, bc, opt));
}
BENCHMARK(BM_TraceBvp)->Args({1, 2048})->Args({2, 256});

static void BM_SobolevNorm(benchmark::State& state) {
    const SpectralGrid g = grid_for(state);
    const SampledField u = gaussian_x(g);
    for (auto _ : state) benchmark::DoNotOptimize(sobolev_norm(u, 1.0));
}
BENCHMARK(BM_SobolevNorm)->Args({1, 16384})->Args({2, 256});
BENCHMARK_MAIN();
