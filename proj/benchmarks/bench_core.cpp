#include "ioncav/entanglement.hpp"
#include "ioncav/oracle.hpp"
#include "ioncav/runner.hpp"

#include <benchmark/benchmark.h>

using namespace ioncav;

static void BM_Amplitudes(benchmark::State& state) {
    double tau = 0.0;
    for (auto _ : state) {
        benchmark::DoNotOptimize(amplitudes_ground(2, 2, tau));
        tau += 1e-3;
    }
}
BENCHMARK(BM_Amplitudes);

static void BM_PartialTranspose(benchmark::State& state) {
    const auto rho = density_from_pure(composite_state(amplitudes_ground(2, 2, 1.1)));
    for (auto _ : state) {
        benchmark::DoNotOptimize(partial_transpose(rho, TransposeSpec::kway(party::A, 3)));
    }
}
BENCHMARK(BM_PartialTranspose);

static void BM_EntanglementReport(benchmark::State& state) {
    const auto amps = amplitudes_ground(2, 2, 1.1);
    for (auto _ : state) {
        benchmark::DoNotOptimize(entanglement_report(amps));
    }
}
BENCHMARK(BM_EntanglementReport);

static void BM_OracleBuild(benchmark::State& state) {
    const auto m = static_cast<int>(state.range(0));
    for (auto _ : state) {
        benchmark::DoNotOptimize(Propagator(FockTruncation::for_chain(m, m)));
    }
}
BENCHMARK(BM_OracleBuild)->Arg(1)->Arg(3)->Arg(5)->Unit(benchmark::kMillisecond);

static void BM_OraclePropagate(benchmark::State& state) {
    SimulationConfig cfg;
    const ChainOracle oracle(cfg);
    double tau = 0.0;
    for (auto _ : state) {
        benchmark::DoNotOptimize(oracle.chain(tau));
        tau += 1e-3;
    }
}
BENCHMARK(BM_OraclePropagate);

static void BM_Sweep(benchmark::State& state) {
    SweepRequest req;
    req.outputs = {Output::Probabilities, Output::NegativitiesA, Output::NegativitiesD, Output::NegativityAB};
    req.steps = 120;
    for (auto _ : state) {
        benchmark::DoNotOptimize(run_sweep(req, 1));
    }
}
BENCHMARK(BM_Sweep)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
