// Microbenchmarks for the hot paths: the eigensolver, fidelity, count
// simulation, linear inversion, and full MLE reconstructions.
#include "qpol/channels.hpp"
#include "qpol/estimators.hpp"
#include "qpol/noise.hpp"
#include "qpol/qfi.hpp"
#include "qpol/qmath.hpp"
#include "qpol/rng.hpp"
#include "qpol/tomography.hpp"

#include <benchmark/benchmark.h>

using namespace qpol;

namespace {

constexpr double kPi = 3.14159265358979323846;

ComplexMatrix random_hermitian(int d, Rng& rng) {
    ComplexMatrix g(d, d);
    for (int r = 0; r < d; ++r)
        for (int c = 0; c < d; ++c) g(r, c) = rng.complex_normal();
    return (g + g.adjoint()) * cd{0.5, 0.0};
}

void BM_EighHermitian(benchmark::State& state) {
    const int d = static_cast<int>(state.range(0));
    Rng rng(1);
    const ComplexMatrix h = random_hermitian(d, rng);
    for (auto _ : state) benchmark::DoNotOptimize(eigh_hermitian(h));
}
BENCHMARK(BM_EighHermitian)->Arg(2)->Arg(4);

void BM_Fidelity(benchmark::State& state) {
    const int d = static_cast<int>(state.range(0));
    Rng rng(2);
    const DensityMatrix a = random_density(d, rng);
    const DensityMatrix b = random_density(d, rng);
    for (auto _ : state) benchmark::DoNotOptimize(fidelity(a, b));
}
BENCHMARK(BM_Fidelity)->Arg(2)->Arg(4);

void BM_ScenarioQfi(benchmark::State& state) {
    const Scenario sc{make_channel(Element::QWP, 37.0 * kPi / 180.0, Configuration::Nonlocal),
                      StateKind::bell_psi_plus()};
    for (auto _ : state) benchmark::DoNotOptimize(scenario_qfi(sc, 37.0 * kPi / 180.0));
}
BENCHMARK(BM_ScenarioQfi);

void BM_CentralDiffQfi(benchmark::State& state) {
    const Scenario sc{make_channel(Element::QWP, 37.0 * kPi / 180.0, Configuration::Nonlocal),
                      StateKind::bell_psi_plus()};
    for (auto _ : state) {
        const ParamState ps =
            channel_derivative(sc, 37.0 * kPi / 180.0, DerivativeMethod::CentralDiff);
        benchmark::DoNotOptimize(qfi_mixed(ps));
    }
}
BENCHMARK(BM_CentralDiffQfi);

void BM_SimulateAndInvert36(benchmark::State& state) {
    const DensityMatrix bell = make_state(StateKind::bell_psi_plus());
    const PovmSet povm = povm_set(PovmMode::TwoFull36);
    for (auto _ : state) {
        const CountRecord rec = simulate_counts_exact(bell, povm, 5000.0);
        benchmark::DoNotOptimize(linear_inversion(rec, povm));
    }
}
BENCHMARK(BM_SimulateAndInvert36);

void BM_NoisyCounts36(benchmark::State& state) {
    const Scenario sc{make_channel(Element::LP, 37.0 * kPi / 180.0, Configuration::Nonlocal),
                      StateKind::bell_psi_plus()};
    const PovmSet povm = povm_set(PovmMode::TwoFull36);
    NoiseConfig cfg;
    Rng rng(3);
    for (auto _ : state) benchmark::DoNotOptimize(noisy_counts(sc, povm, cfg, rng));
}
BENCHMARK(BM_NoisyCounts36);

void BM_MleReconstruct(benchmark::State& state) {
    const bool two_qubit = state.range(0) == 4;
    const PovmSet povm = povm_set(two_qubit ? PovmMode::TwoMinimal16 : PovmMode::Single6);
    Rng noise(4);
    const DensityMatrix rho = two_qubit ? make_state(StateKind::bell_psi_plus())
                                        : make_state(StateKind::maximally_mixed(2));
    const CountRecord rec = simulate_counts(rho, povm, 5000.0, CountingMode::Poisson, noise);
    for (auto _ : state) {
        Rng rng(5);
        benchmark::DoNotOptimize(mle_reconstruct(rec, povm, 5000.0, MleOptions{}, rng));
    }
}
BENCHMARK(BM_MleReconstruct)->Arg(2)->Arg(4)->Unit(benchmark::kMillisecond);

void BM_NoisyTrial(benchmark::State& state) {
    const Scenario sc{make_channel(Element::LP, 37.0 * kPi / 180.0, Configuration::Nonlocal),
                      StateKind::bell_psi_plus()};
    const PovmSet povm = povm_set(PovmMode::TwoFull36);
    NoiseConfig cfg;
    std::uint64_t seed = 0;
    for (auto _ : state)
        benchmark::DoNotOptimize(run_noisy_trial(sc, povm, cfg, seed++));
}
BENCHMARK(BM_NoisyTrial)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
