// Acceptance suite: one PASS/FAIL line per criterion, exit status 1 if any fails.

#include "ioncav/basis.hpp"
#include "ioncav/dynamics.hpp"
#include "ioncav/entanglement.hpp"
#include "ioncav/oracle.hpp"
#include "ioncav/runner.hpp"
#include "oracles.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numbers>
#include <random>
#include <string>
#include <vector>

using namespace ioncav;

namespace {

constexpr double pi = std::numbers::pi;

// Tolerances, one per criterion.
constexpr double kTimingRelTol = 1e-3;        // 1
constexpr double kTableTol = 1e-10;           // 2
constexpr double kFig1PeakLo = 0.73;          // 3
constexpr double kFig1PeakHi = 0.77;
constexpr double kFig1TauTol = 0.1;
constexpr double kFig1SideMax = 0.02;
constexpr double kReturnMin = 0.99;           // 4
constexpr double kOracleTol = 1e-8;           // 5
constexpr int kOracleSamples = 200;
constexpr double kIdentityTol = 1e-9;         // 6
constexpr int kRandomStates = 50;
constexpr double kClosedFormTol = 1e-9;       // 7
constexpr double kWindowTol = 0.05;           // 8
constexpr double kStructureTol = 1e-9;        // 9
constexpr double kWNegativityTol = 1e-10;     // 10
constexpr double kBipartiteTol = 1e-10;       // 11
constexpr double kLargeNTol = 1e-4;           // 12

struct Outcome {
    bool pass = false;
    std::string detail;
};

std::string fmt(const char* f, double x) {
    char buf[64];
    std::snprintf(buf, sizeof buf, f, x);
    return buf;
}

// The full tau grid of both plotted initial states.
std::vector<SweepRequest> figure_grids(std::set<Output> outputs) {
    std::vector<SweepRequest> out;
    for (int id : {1, 2}) {
        SweepRequest r = figure_recipe(id).datasets.at(0);
        r.outputs = outputs;
        out.push_back(r);
    }
    return out;
}

Outcome w_state_timing() {
    const double t = w1_generation_time(1, 8.95e6, 0.01) * 1e6;
    return {std::abs(t - 10.133) <= kTimingRelTol * 10.133, fmt("t_min = %.5f us", t)};
}

Outcome probability_tables() {
    const auto p8 = probabilities(amplitudes_ground(1, 1, pi / 8.0));
    const auto p4 = probabilities(amplitudes_ground(1, 1, pi / 4.0));
    const std::array<double, 4> e8{1.0 / 16.0, 0.75, 3.0 / 16.0, 0.0};
    const std::array<double, 4> e4{0.25, 0.0, 0.75, 0.0};
    double worst = 0.0;
    for (std::size_t i = 0; i < 4; ++i) {
        worst = std::max({worst, std::abs(p8[i] - e8[i]), std::abs(p4[i] - e4[i])});
    }
    return {worst <= kTableTol, fmt("max deviation %.2e", worst)};
}

Outcome figure1_peak() {
    const auto result = run_sweep(figure_recipe(1).datasets.at(0));
    const auto best = std::max_element(result.rows.begin(), result.rows.end(), [](const auto& x, const auto& y) {
        return (*x.probabilities)[1] < (*y.probabilities)[1];
    });
    const auto& p = *best->probabilities;
    const bool ok = p[1] >= kFig1PeakLo && p[1] <= kFig1PeakHi && std::abs(best->tau - 3.0 * pi / 8.0) <= kFig1TauTol &&
                    p[0] < kFig1SideMax && p[2] < kFig1SideMax;
    return {ok, fmt("P1 = %.4f", p[1]) + fmt(" at tau = %.4f", best->tau) + fmt(" (3pi/8 = %.4f)", 3.0 * pi / 8.0) +
                    fmt(", P0 = %.4f", p[0]) + fmt(", P2 = %.4f", p[2])};
}

Outcome return_to_separability() {
    const double p = std::norm(amplitudes_excited(0, 0, 3.0 * pi / 4.0).a[0]);
    return {p >= kReturnMin, fmt("|a0(3pi/4)|^2 = %.5f", p)};
}

Outcome oracle_equivalence() {
    double worst = 0.0;
    double leak = 0.0;
    for (int m = 0; m <= 4; ++m) {
        for (int n = 0; n <= 4; ++n) {
            SimulationConfig cfg;
            cfg.phonons0 = m + 1;
            cfg.photons0 = n + 1;
            const ChainOracle oracle(cfg);
            for (int k = 0; k < kOracleSamples; ++k) {
                const double tau = 3.0 * pi * k / (kOracleSamples - 1);
                const auto projected = oracle.chain(tau);
                const auto analytic = amplitudes(cfg, tau);
                for (std::size_t i = 0; i < 4; ++i) {
                    worst = std::max(worst, std::abs(projected.amplitudes.a[i] - analytic.a[i]));
                }
                leak = std::max(leak, projected.residual);
            }
        }
    }
    return {worst <= kOracleTol && leak <= kChainResidualTolerance,
            fmt("max component gap %.2e", worst) + fmt(", max off-chain population %.2e", leak)};
}

Outcome decomposition_identity() {
    double sweep_gap = 0.0;
    for (const auto& req : figure_grids({Output::NegativitiesA, Output::NegativitiesD})) {
        for (const auto& row : run_sweep(req).rows) {
            for (const auto* s : {&*row.a, &*row.d}) {
                sweep_gap = std::max(sweep_gap, std::abs(s->global - s->reconstructed()));
            }
        }
    }
    std::mt19937_64 rng(20240601);
    double random_gap = 0.0;
    double with_one_way = 0.0;
    for (int k = 0; k < kRandomStates; ++k) {
        const auto rho = DensityMatrix::from_pure(oracle::haar_state(32, rng), SubsystemLayout::four_party());
        for (std::size_t p : {party::A, party::D}) {
            const auto s = subsystem_negativities(rho, p, false);
            random_gap = std::max(random_gap, std::abs(s.global - s.reconstructed()));
            with_one_way = std::max(with_one_way, std::abs(s.global - s.reconstructed() - s.one_way));
        }
    }
    double real_gap = 0.0;
    for (int k = 0; k < kRandomStates; ++k) {
        const auto rho = DensityMatrix::from_pure(oracle::real_random_state(32, rng), SubsystemLayout::four_party());
        for (std::size_t p : {party::A, party::D}) {
            const auto s = subsystem_negativities(rho, p, false);
            real_gap = std::max(real_gap, std::abs(s.global - s.reconstructed()));
        }
    }
    const bool ok = sweep_gap <= kIdentityTol && random_gap <= kIdentityTol;
    return {ok, fmt("sweep %.2e", sweep_gap) + fmt(", random complex %.2e", random_gap) +
                    fmt(" [diagnostics: random real %.2e", real_gap) +
                    fmt(", complex with one-way term %.2e]", with_one_way)};
}

Outcome closed_forms() {
    double worst = 0.0;
    for (const auto& req : figure_grids({Output::Probabilities})) {
        for (int i = 0; i < req.steps; ++i) {
            worst = std::max(worst, entanglement_report(req.config, req.tau(i)).max_discrepancy());
        }
    }
    return {worst <= kClosedFormTol, fmt("max |numeric - closed form| %.2e", worst)};
}

Outcome window_values() {
    SimulationConfig cfg;
    cfg.phonons0 = 3;
    cfg.photons0 = 3;
    const auto peak = locate_population_peak(cfg, 1, 0.0, 3.0 * pi);
    const auto report = entanglement_report(cfg, peak.tau);
    const double e2 = report.a.e(2);
    const double e3 = report.a.e(3);
    const double e4 = report.a.e(4);
    const bool ok = std::abs(e2 - 0.5) <= kWindowTol && std::abs(e3 - 0.5) <= kWindowTol && e4 < kWindowTol;
    return {ok, fmt("tau = %.4f", peak.tau) + fmt(": E2^A = %.4f", e2) + fmt(", E3^A = %.4f", e3) +
                    fmt(", E4^A = %.4f", e4)};
}

Outcome structural_claims() {
    double constrained = 0.0;
    for (const auto& req : figure_grids({Output::NegativitiesA})) {
        for (const auto& row : run_sweep(req).rows) {
            const double e3 = row.a->e(3);
            constrained = std::max({constrained, std::abs(*row.a->constrained_value({0, 1, 2})),
                                    std::abs(*row.a->constrained_value({0, 1, 3}) - e3 / 2.0),
                                    std::abs(*row.a->constrained_value({0, 2, 3}) - e3 / 2.0)});
        }
    }
    double window = 0.0;
    for (auto prep : {Preparation::AllGround, Preparation::AllExcited}) {
        SimulationConfig cfg;
        cfg.preparation = prep;
        cfg.phonons0 = prep == Preparation::AllGround ? 3 : 0;
        cfg.photons0 = cfg.phonons0;
        const auto rho = density_from_pure(composite_state(w_window_amplitudes(cfg)));
        const auto d = subsystem_negativities(rho, party::D, false);
        window = std::max({window, std::abs(d.global - d.e(3)), std::abs(d.e(2)), std::abs(d.e(4))});
    }
    return {constrained <= kStructureTol && window <= kStructureTol,
            fmt("constrained split %.2e", constrained) + fmt(", window D terms %.2e", window)};
}

Outcome w_negativity() {
    const auto rho = DensityMatrix::from_pure(dicke_state(1), SubsystemLayout({2, 2, 2}));
    const double n = negativity(partial_transpose(rho, TransposeSpec::global(party::A)), 2);
    const double expected = 2.0 * std::sqrt(2.0) / 3.0;
    return {std::abs(n - expected) <= kWNegativityTol, fmt("N = %.12f", n) + fmt(" (2 sqrt 2 / 3 = %.12f)", expected)};
}

Outcome single_phonon() {
    double worst = 0.0;
    for (int photons = 1; photons <= 5; ++photons) {
        SweepRequest req;
        req.config.phonons0 = 1;
        req.config.photons0 = photons;
        for (int i = 0; i < req.steps; ++i) {
            const auto rho = density_from_pure(composite_state(req.config, req.tau(i)));
            for (std::size_t p = 0; p < 4; ++p) {
                const auto s = subsystem_negativities(rho, p, false);
                worst = std::max({worst, std::abs(s.e(3)), std::abs(s.e(4))});
            }
        }
    }
    return {worst <= kBipartiteTol, fmt("max |E3|, |E4| = %.2e", worst)};
}

Outcome large_n_limit() {
    bool monotone = true;
    for (int n = 1; n < 10000; ++n) {
        monotone = monotone && w2_peak_probability(n) < w2_peak_probability(n + 1);
    }
    const double gap = 24.0 / 25.0 - w2_peak_probability(10000);
    return {monotone && std::abs(gap) <= kLargeNTol,
            std::string(monotone ? "monotone" : "NOT monotone") + fmt(", 24/25 - P(1e4) = %.2e", gap)};
}

} // namespace

int main() {
    const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
        {"W-state timing", w_state_timing},
        {"exact probability tables", probability_tables},
        {"figure-1 peak", figure1_peak},
        {"return to separability", return_to_separability},
        {"oracle equivalence", oracle_equivalence},
        {"decomposition identity", decomposition_identity},
        {"closed-form negativities", closed_forms},
        {"W-window entanglement values", window_values},
        {"structural claims", structural_claims},
        {"W-state negativity constant", w_negativity},
        {"single-phonon restriction", single_phonon},
        {"large-n limit", large_n_limit},
    };

    int failures = 0;
    const auto start = std::chrono::steady_clock::now();
    for (std::size_t i = 0; i < criteria.size(); ++i) {
        Outcome o;
        try {
            o = criteria[i].second();
        } catch (const std::exception& e) {
            o = {false, std::string("exception: ") + e.what()};
        }
        failures += o.pass ? 0 : 1;
        std::printf("%s %2zu %s: %s\n", o.pass ? "PASS" : "FAIL", i + 1, criteria[i].first.c_str(), o.detail.c_str());
        std::fflush(stdout);
    }
    const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    std::printf("%zu/%zu criteria passed in %.1f s\n", criteria.size() - failures, criteria.size(), seconds);
    return failures == 0 ? 0 : 1;
}
