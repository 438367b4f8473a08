#pragma once

// Closed-form dynamics of the sigma = 3 invariant chain
//
//   |111; m-2, n-2>  <->  |W2; m-1, n-1>  <->  |W1; m, n>  <->  |000; m+1, n+1>
//
// under the red-sideband interaction  H = hbar g eta (s+ b a + s- b^dag a^dag).
// All public times are the dimensionless tau = g * eta * t unless stated otherwise.

#include "ioncav/types.hpp"

#include <array>
#include <string>
#include <vector>

namespace ioncav {

enum class Preparation { AllGround, AllExcited };

[[nodiscard]] std::string to_string(Preparation p);
/// Accepts "ground" / "excited". Throws ValidationError otherwise.
[[nodiscard]] Preparation parse_preparation(const std::string& text);

/// Labels (m, n) of the chain that contains a given initial state.
struct ChainLabels {
    int m = 0;
    int n = 0;
};

struct SimulationConfig {
    Preparation preparation = Preparation::AllGround;
    /// Initial phonon and photon counts of the centre-of-mass mode and the cavity.
    int phonons0 = 3;
    int photons0 = 3;
    /// Ion-cavity coupling as an angular frequency (s^-1).
    double g = 8.95e6;
    /// Lamb-Dicke parameter.
    double eta = 0.01;

    bool include_global_phase = false;
    // Trap, cavity and atomic angular frequencies; they only enter the global phase.
    double nu = 0.0;
    double omega_c = 0.0;
    double omega0 = 0.0;

    /// Throws ValidationError on invalid fields. Returns non-fatal warnings
    /// (eta outside the Lamb-Dicke regime).
    std::vector<std::string> validate() const;

    /// AllGround: (phonons0 - 1, photons0 - 1). AllExcited: (phonons0 + 2, photons0 + 2).
    [[nodiscard]] ChainLabels chain() const noexcept;
};

/// Couplings of the chain block in units of hbar g eta, plus the derived
/// quantities that appear in the closed-form solution.
struct SpectralData {
    double A = 0.0;
    double B = 0.0;
    double C = 0.0;
    double mu = 0.0;    // A^2 + B^2 + C^2
    double beta = 0.0;  // sqrt(mu^2 - 4 A^2 C^2)
    double mu1 = 0.0;   // mu - 2 A^2
    double mu2 = 0.0;   // mu - 2 C^2
    /// -sqrt(mu-beta), +sqrt(mu-beta), -sqrt(mu+beta), +sqrt(mu+beta)
    std::array<double, 4> eigenvalues{};
    /// Number of chain states reachable from |000; m+1, n+1> (1..4).
    int dim = 1;
};

/// Derives mu, beta, mu1, mu2, eigenvalues and dim from raw couplings.
[[nodiscard]] SpectralData spectral_from_couplings(double A, double B, double C);

/// Below this beta the closed forms divide by ~0 and a numeric path is used.
inline constexpr double kDegenerateBeta = 1e-12;

struct BlockHamiltonian {
    SpectralData spectral;
    /// Tridiagonal block in the basis (|111;m-2,n-2>, |W2;m-1,n-1>, |W1;m,n>, |000;m+1,n+1>)
    /// with off-diagonals sqrt(2) A, sqrt(2) B, sqrt(2) C.
    Eigen::Matrix4d matrix;
};

/// Couplings for arbitrary integer (m, n). Rungs that would need a negative
/// Fock number are zeroed.
[[nodiscard]] BlockHamiltonian block_hamiltonian(int m, int n);

/// The block written bottom-up, i.e. in the basis (|000>, |W1>, |W2>, |111>).
[[nodiscard]] Eigen::Matrix4d block_matrix_ground_up(const SpectralData& s);

struct SpectralUnitary {
    /// Rows are eigenvectors; columns follow the ground-up chain order
    /// (|000;m+1,n+1>, |W1;m,n>, |W2;m-1,n-1>, |111;m-2,n-2>), so that
    /// U * block_matrix_ground_up(s) * U^T = diag(eigenvalues).
    Eigen::Matrix4d matrix;
    std::array<double, 4> eigenvalues{};
    /// True when beta was degenerate and a dense eigensolver produced the matrix.
    bool numeric_fallback = false;
};

[[nodiscard]] SpectralUnitary spectral_unitary(const SpectralData& s);

/// Evolves a ground-up chain vector by exp(-i H tau) through the eigenbasis
/// of spectral_unitary (expansion, phase, re-expansion).
[[nodiscard]] Eigen::Vector4cd evolve_chain(const SpectralData& s, const Eigen::Vector4cd& initial,
                                            double tau);

/// The four amplitudes of an evolved chain state.
///
/// For AllGround, a[i] multiplies the chain state with i excited ions.
/// For AllExcited the roles are reversed: a[0] multiplies |111>, a[1] |W2>,
/// a[2] |W1> and a[3] |000>. logical() undoes that reversal.
struct AmplitudeSet {
    std::array<Complex, 4> a{};
    double tau = 0.0;
    Preparation preparation = Preparation::AllGround;

    /// Coefficients of (|000>, |W1>, |W2>, |111>) with their D levels 0..3.
    [[nodiscard]] std::array<Complex, 4> logical() const noexcept;
    [[nodiscard]] double norm_squared() const noexcept;
};

/// a0..a3 for a start in the bottom state |000; m+1, n+1> of the chain with
/// spectral data s, global phase omitted.
[[nodiscard]] std::array<Complex, 4> chain_coefficients(const SpectralData& s, double tau);

/// Initial state |000; m+1, n+1>. Requires m, n >= -1.
[[nodiscard]] AmplitudeSet amplitudes_ground(int m, int n, double tau);

/// Initial state |111; p, q> given the physical phonon/photon counts p, q >= 0.
/// Internally m = p + 2, n = q + 2; the start sits at the top of the chain, so
/// the coefficient functions are those of the reversed chain (A and C swapped).
[[nodiscard]] AmplitudeSet amplitudes_excited(int phonons, int photons, double tau);

/// Dispatches on cfg.preparation and applies exp(-i omega_1 t) when requested.
[[nodiscard]] AmplitudeSet amplitudes(const SimulationConfig& cfg, double tau);

/// Energy of the initial product state divided by hbar (the omega_1 of the phase factor).
[[nodiscard]] double global_phase_frequency(const SimulationConfig& cfg);

/// P_k = probability of finding k ions excited (k = 0..3).
[[nodiscard]] std::array<double, 4> probabilities(const AmplitudeSet& a);

/// Logical four-party state with amplitudes placed on the composite layout.
[[nodiscard]] CompositeVector composite_state(const AmplitudeSet& a);
[[nodiscard]] CompositeVector composite_state(const SimulationConfig& cfg, double tau);

/// Idealised window state where both sine factors equal one: the W1 window
/// (AllGround, weights on |W1> and |111>) or the W2 window (AllExcited, weights
/// on |000> and |W2>). tau is NaN because the window is generally only
/// approached, not reached.
[[nodiscard]] AmplitudeSet w_window_amplitudes(const SimulationConfig& cfg);

/// Shortest interaction time (seconds) that maximises the W1 population for a
/// single-phonon start with n_photons >= 1 photons: pi / (2 g eta sqrt(3 n_photons)).
[[nodiscard]] double w1_generation_time(int n_photons, double g, double eta);

/// Peak |W2> population for a two-phonon start with n+1 photons:
/// 24 n (n+1) / (5n+3)^2. Zero for n = 0.
[[nodiscard]] double w2_peak_probability(int n);

struct PopulationPeak {
    double tau = 0.0;
    double probability = 0.0;
};

/// Global maximum of P_k on [tau_lo, tau_hi]: dense scan, then Brent refinement.
[[nodiscard]] PopulationPeak locate_population_peak(const SimulationConfig& cfg, int excitations,
                                                    double tau_lo, double tau_hi,
                                                    int scan_points = 4000);

} // namespace ioncav
