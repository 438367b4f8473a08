#include "ioncav/dynamics.hpp"
#include "oracles.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

using namespace ioncav;

namespace {

constexpr double pi = std::numbers::pi;

double max_gap(const std::array<Complex, 4>& x, const std::array<Complex, 4>& y) {
    double worst = 0.0;
    for (std::size_t i = 0; i < 4; ++i) {
        worst = std::max(worst, std::abs(x[i] - y[i]));
    }
    return worst;
}

} // namespace

TEST(Dynamics, BlockMatchesLadderOperators) {
    for (int m = -1; m <= 5; ++m) {
        for (int n = -1; n <= 5; ++n) {
            const auto s = block_hamiltonian(m, n).spectral;
            EXPECT_LT((block_matrix_ground_up(s) - oracle::chain_block(m, n)).cwiseAbs().maxCoeff(), 1e-13)
                << m << "," << n;
        }
    }
}

TEST(Dynamics, EigenvaluesMatchDenseSolver) {
    for (int m = 1; m <= 6; ++m) {
        for (int n = 1; n <= 6; ++n) {
            const auto s = block_hamiltonian(m, n).spectral;
            Eigen::SelfAdjointEigenSolver<Eigen::Matrix4d> solver(oracle::chain_block(m, n));
            std::array<double, 4> ours = s.eigenvalues;
            std::sort(ours.begin(), ours.end());
            for (int k = 0; k < 4; ++k) {
                EXPECT_NEAR(ours[k], solver.eigenvalues()[k], 1e-12);
            }
        }
    }
}

TEST(Dynamics, SpectralUnitaryIsOrthogonalAndDiagonalises) {
    for (int m = 0; m <= 5; ++m) {
        for (int n = 0; n <= 5; ++n) {
            const auto s = block_hamiltonian(m, n).spectral;
            const auto u = spectral_unitary(s);
            EXPECT_LT((u.matrix * u.matrix.transpose() - Eigen::Matrix4d::Identity()).cwiseAbs().maxCoeff(), 1e-12);
            Eigen::Matrix4d diag = Eigen::Matrix4d::Zero();
            for (int k = 0; k < 4; ++k) {
                diag(k, k) = u.eigenvalues[k];
            }
            EXPECT_LT((u.matrix * block_matrix_ground_up(s) * u.matrix.transpose() - diag).cwiseAbs().maxCoeff(),
                      1e-12)
                << m << "," << n;
        }
    }
}

TEST(Dynamics, ClosedFormMatchesMatrixExponential) {
    for (int m = -1; m <= 6; ++m) {
        for (int n = -1; n <= 6; ++n) {
            for (double tau : {0.0, 0.1, 0.7, 1.3, 2.9, 5.5, 9.0}) {
                const auto a = amplitudes_ground(m, n, tau).a;
                EXPECT_LT(max_gap(a, oracle::chain_evolution(m, n, tau)), 1e-11)
                    << "m=" << m << " n=" << n << " tau=" << tau;
            }
        }
    }
}

TEST(Dynamics, EigenbasisRouteMatchesClosedForm) {
    for (int m = 0; m <= 4; ++m) {
        for (double tau : {0.2, 1.0, 4.0}) {
            const auto s = block_hamiltonian(m, m + 1).spectral;
            const Eigen::Vector4cd v = evolve_chain(s, Eigen::Vector4cd::Unit(0), tau);
            const auto a = chain_coefficients(s, tau);
            EXPECT_LT(max_gap({v[0], v[1], v[2], v[3]}, a), 1e-12);
        }
    }
}

TEST(Dynamics, ExcitedStartFollowsTheReversedChain) {
    // |111; p, q> sits at the top of chain (p + 2, q + 2).
    for (int p = 0; p <= 4; ++p) {
        for (int q = 0; q <= 4; ++q) {
            for (double tau : {0.0, 0.4, 1.7, 3.0 * pi / 4.0, 6.0}) {
                const auto ours = amplitudes_excited(p, q, tau);
                const auto ref = oracle::chain_evolution(p + 2, q + 2, tau, 3);
                // a0 -> |111>, a1 -> |W2>, a2 -> |W1>, a3 -> |000>.
                const std::array<Complex, 4> reordered{ref[3], ref[2], ref[1], ref[0]};
                EXPECT_LT(max_gap(ours.a, reordered), 1e-11) << p << "," << q << " tau=" << tau;
                const auto logical = ours.logical();
                EXPECT_LT(max_gap(logical, ref), 1e-11);
            }
        }
    }
}

TEST(Dynamics, AmplitudesStayNormalised) {
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> tau(0.0, 20.0);
    for (int m = -1; m <= 8; ++m) {
        for (int n = -1; n <= 8; ++n) {
            for (int k = 0; k < 20; ++k) {
                EXPECT_NEAR(amplitudes_ground(m, n, tau(rng)).norm_squared(), 1.0, 1e-12);
            }
        }
    }
}

TEST(Dynamics, InitialConditions) {
    const auto g = amplitudes_ground(2, 2, 0.0);
    EXPECT_NEAR(std::abs(g.a[0] - 1.0), 0.0, 1e-15);
    const auto e = amplitudes_excited(0, 0, 0.0);
    EXPECT_NEAR(probabilities(e)[3], 1.0, 1e-15);
}

TEST(Dynamics, SinglePhononChainOscillates) {
    // m = n = 0: cos^2(sqrt(3) tau) on |000>, sin^2 on |W1>.
    for (double tau : {0.1, 0.5, 1.0, 2.0}) {
        const auto p = probabilities(amplitudes_ground(0, 0, tau));
        EXPECT_NEAR(p[0], std::pow(std::cos(std::sqrt(3.0) * tau), 2), 1e-12);
        EXPECT_NEAR(p[1], std::pow(std::sin(std::sqrt(3.0) * tau), 2), 1e-12);
        EXPECT_NEAR(p[2] + p[3], 0.0, 1e-15);
    }
}

TEST(Dynamics, TwoPhononChainMatchesCosFourTau) {
    for (double tau : {0.05, 0.3, 0.9, 2.2}) {
        const auto p = probabilities(amplitudes_ground(1, 1, tau));
        const double c = std::cos(4.0 * tau);
        EXPECT_NEAR(p[0], std::pow(0.75 * c + 0.25, 2), 1e-12);
        EXPECT_NEAR(p[1], 0.75 * std::pow(std::sin(4.0 * tau), 2), 1e-12);
        EXPECT_NEAR(p[2], 3.0 / 16.0 * std::pow(c - 1.0, 2), 1e-12);
        EXPECT_NEAR(p[3], 0.0, 1e-15);
    }
}

TEST(Dynamics, A2VanishesWhereCosFourTauIsOne) {
    for (int k = 0; k <= 6; ++k) {
        EXPECT_LT(std::abs(amplitudes_ground(1, 1, k * pi / 2.0).a[2]), 1e-13);
    }
}

TEST(Dynamics, FrozenChain) {
    // |000; 0, 0> has nothing to couple to.
    const auto a = amplitudes_ground(-1, -1, 3.0);
    EXPECT_NEAR(std::abs(a.a[0]), 1.0, 1e-14);
}

TEST(Dynamics, SpectralDimension) {
    EXPECT_EQ(block_hamiltonian(-1, 3).spectral.dim, 1);
    EXPECT_EQ(block_hamiltonian(0, 3).spectral.dim, 2);
    EXPECT_EQ(block_hamiltonian(1, 3).spectral.dim, 3);
    EXPECT_EQ(block_hamiltonian(2, 3).spectral.dim, 4);
}

TEST(Dynamics, GlobalPhaseLeavesProbabilities) {
    SimulationConfig cfg;
    cfg.include_global_phase = true;
    cfg.nu = 2.0e7;
    cfg.omega_c = 3.0e9;
    cfg.omega0 = 3.1e9;
    SimulationConfig bare = cfg;
    bare.include_global_phase = false;
    const double tau = 0.8;
    const auto with = amplitudes(cfg, tau);
    const auto without = amplitudes(bare, tau);
    const Complex ratio = with.a[0] / without.a[0];
    EXPECT_NEAR(std::abs(ratio), 1.0, 1e-12);
    for (std::size_t i = 0; i < 4; ++i) {
        EXPECT_LT(std::abs(with.a[i] - ratio * without.a[i]), 1e-12);
    }
    const double t = tau / (cfg.g * cfg.eta);
    const double omega1 = cfg.nu * 3.5 + cfg.omega_c * 3.0 - 1.5 * cfg.omega0;
    EXPECT_LT(std::abs(ratio - std::exp(Complex(0.0, -omega1 * t))), 1e-9);
}

TEST(Dynamics, ConfigValidation) {
    SimulationConfig cfg;
    EXPECT_TRUE(cfg.validate().empty());
    cfg.eta = 0.3;
    EXPECT_EQ(cfg.validate().size(), 1U);
    cfg.eta = -1.0;
    EXPECT_THROW((void)cfg.validate(), ValidationError);
    cfg = SimulationConfig{};
    cfg.phonons0 = -1;
    EXPECT_THROW((void)cfg.validate(), ValidationError);
    cfg = SimulationConfig{};
    cfg.g = std::nan("");
    EXPECT_THROW((void)cfg.validate(), ValidationError);
    EXPECT_THROW((void)parse_preparation("sideways"), ValidationError);
    EXPECT_THROW((void)amplitudes_ground(-2, 0, 0.0), ValidationError);
    EXPECT_THROW((void)amplitudes_excited(-1, 0, 0.0), ValidationError);
}

TEST(Dynamics, ChainLabels) {
    SimulationConfig cfg;
    cfg.phonons0 = 3;
    cfg.photons0 = 4;
    EXPECT_EQ(cfg.chain().m, 2);
    EXPECT_EQ(cfg.chain().n, 3);
    cfg.preparation = Preparation::AllExcited;
    EXPECT_EQ(cfg.chain().m, 5);
    EXPECT_EQ(cfg.chain().n, 6);
}

TEST(Dynamics, WindowStateIsNormalisedAndTwoComponent) {
    for (auto prep : {Preparation::AllGround, Preparation::AllExcited}) {
        SimulationConfig cfg;
        cfg.preparation = prep;
        cfg.phonons0 = prep == Preparation::AllGround ? 3 : 0;
        cfg.photons0 = cfg.phonons0;
        const auto w = w_window_amplitudes(cfg);
        EXPECT_NEAR(w.norm_squared(), 1.0, 1e-12);
        EXPECT_EQ(w.a[0], Complex(0.0));
        EXPECT_EQ(w.a[2], Complex(0.0));
        EXPECT_TRUE(std::isnan(w.tau));
    }
}

TEST(Dynamics, W1GenerationTime) {
    EXPECT_NEAR(w1_generation_time(1, 8.95e6, 0.01) * 1e6, 10.133, 0.001);
    EXPECT_NEAR(w1_generation_time(4, 1.0, 1.0), pi / (2.0 * std::sqrt(12.0)), 1e-15);
    EXPECT_THROW((void)w1_generation_time(0, 1.0, 1.0), ValidationError);
}

TEST(Dynamics, W2PeakProbability) {
    EXPECT_EQ(w2_peak_probability(0), 0.0);
    EXPECT_NEAR(w2_peak_probability(1), 0.75, 1e-15);
    for (int n = 1; n < 2000; ++n) {
        EXPECT_LT(w2_peak_probability(n), w2_peak_probability(n + 1));
    }
    EXPECT_THROW((void)w2_peak_probability(-1), ValidationError);
}

TEST(Dynamics, W2PeakMatchesDynamics) {
    // Two phonons and n + 1 photons: chain (1, n); the |W2> peak over a long
    // window reaches 24 n (n + 1) / (5n + 3)^2.
    for (int n = 1; n <= 4; ++n) {
        SimulationConfig cfg;
        cfg.phonons0 = 2;
        cfg.photons0 = n + 1;
        const auto peak = locate_population_peak(cfg, 2, 0.0, 40.0, 40000);
        EXPECT_LE(peak.probability, w2_peak_probability(n) + 1e-9);
        EXPECT_GT(peak.probability, w2_peak_probability(n) - 2e-3) << n;
    }
}

TEST(Dynamics, PopulationPeakRefines) {
    SimulationConfig cfg;
    cfg.phonons0 = 1;
    cfg.photons0 = 1;
    const auto peak = locate_population_peak(cfg, 1, 0.0, 2.0, 50);
    EXPECT_NEAR(peak.tau, pi / (2.0 * std::sqrt(3.0)), 1e-6);
    EXPECT_NEAR(peak.probability, 1.0, 1e-12);
}
