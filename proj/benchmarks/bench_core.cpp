#include <benchmark/benchmark.h>

#include <random>

#include "focksim/scenarios.hpp"

using namespace focksim;

namespace {

PureState random_state(const ModeSet& ms, std::mt19937_64& rng) {
    std::normal_distribution<double> gauss;
    Eigen::VectorXcd v(ms.dim());
    for (Eigen::Index i = 0; i < ms.dim(); ++i) v(i) = cplx(gauss(rng), gauss(rng));
    v /= v.norm();
    return PureState(ms, std::move(v), 1.0);
}

void BM_BeamsplitterPure(benchmark::State& state) {
    const int modes = static_cast<int>(state.range(0));
    std::mt19937_64 rng(1);
    const ModeSet ms(modes, 5);
    const PureState psi = random_state(ms, rng);
    const BeamSplitter bs = BeamSplitter::balanced();
    for (auto _ : state) {
        benchmark::DoNotOptimize(apply_beamsplitter(psi, 0, 1, bs).state.amplitudes().data());
    }
}
BENCHMARK(BM_BeamsplitterPure)->Arg(2)->Arg(3)->Arg(4);

void BM_BeamsplitterMixed(benchmark::State& state) {
    std::mt19937_64 rng(2);
    const ModeSet ms(3, 5);
    const MixedState rho = MixedState::from_pure(random_state(ms, rng));
    const BeamSplitter bs = BeamSplitter::balanced();
    for (auto _ : state) {
        benchmark::DoNotOptimize(apply_beamsplitter(rho, 0, 1, bs).matrix().data());
    }
}
BENCHMARK(BM_BeamsplitterMixed);

void BM_Attenuate(benchmark::State& state) {
    std::mt19937_64 rng(3);
    const ModeSet ms(3, 5);
    const MixedState rho = MixedState::from_pure(random_state(ms, rng));
    for (auto _ : state) {
        benchmark::DoNotOptimize(attenuate(rho, 1, {0.47}).matrix().data());
    }
}
BENCHMARK(BM_Attenuate);

void BM_PartialTrace(benchmark::State& state) {
    std::mt19937_64 rng(4);
    const ModeSet ms(3, 5);
    const MixedState rho = MixedState::from_pure(random_state(ms, rng));
    for (auto _ : state) {
        benchmark::DoNotOptimize(partial_trace(rho, {0}).matrix().data());
    }
}
BENCHMARK(BM_PartialTrace);

void BM_MarginalDistribution(benchmark::State& state) {
    const ModeSet ms(1, 5);
    const MixedState rho = MixedState::from_pure(fock_state(ms, {2}));
    std::vector<double> grid;
    for (double x = -6.0; x <= 6.0; x += 0.005) grid.push_back(x);
    for (auto _ : state) {
        benchmark::DoNotOptimize(marginal_distribution(rho, 0.7, grid).data());
    }
}
BENCHMARK(BM_MarginalDistribution);

void BM_SampleQuadratures(benchmark::State& state) {
    const ModeSet ms(1, 5);
    const MixedState rho = MixedState::from_pure(fock_state(ms, {1}));
    const std::vector<double> phases = ExperimentConfig::default_phases();
    for (auto _ : state) {
        benchmark::DoNotOptimize(sample_quadratures(rho, phases, 1000, 77, "bench").samples.data());
    }
}
BENCHMARK(BM_SampleQuadratures);

void BM_MaxlikIterations(benchmark::State& state) {
    const ModeSet ms(1, 5);
    const MixedState rho =
        attenuate(MixedState::from_pure(fock_state(ms, {1})), 0, {0.47});
    const QuadratureDataset ds =
        sample_quadratures(rho, ExperimentConfig::default_phases(), 1000, 78, "bench");
    TomographySettings settings;
    settings.efficiency_compensation = 0.53;
    settings.max_iterations = static_cast<int>(state.range(0));
    settings.loglik_tolerance = 1e-300; // run the full budget
    for (auto _ : state) {
        benchmark::DoNotOptimize(maxlik_reconstruct(ds, settings).iterations_used);
    }
}
BENCHMARK(BM_MaxlikIterations)->Arg(10)->Arg(100);

void BM_HeraldedPrep(benchmark::State& state) {
    const ExperimentConfig cfg;
    for (auto _ : state) {
        benchmark::DoNotOptimize(heralded_fock_prep(cfg, 2).herald_probability);
    }
}
BENCHMARK(BM_HeraldedPrep);

} // namespace

BENCHMARK_MAIN();
