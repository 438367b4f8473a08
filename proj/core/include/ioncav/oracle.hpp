#pragma once

// Brute-force reference for the chain dynamics: the red-sideband interaction
// on a truncated Fock space, propagated by dense eigendecomposition. It shares
// nothing with the closed-form path beyond the basis conventions.

#include "ioncav/basis.hpp"
#include "ioncav/dynamics.hpp"
#include "ioncav/types.hpp"

#include <cstddef>
#include <stdexcept>
#include <utility>

namespace ioncav {

inline constexpr std::size_t kMaxOracleDimension = 4096;

struct FockTruncation {
    int max_phonons = 0;
    int max_photons = 0;

    [[nodiscard]] std::size_t dimension() const noexcept {
        return 8 * static_cast<std::size_t>(max_phonons + 1) * static_cast<std::size_t>(max_photons + 1);
    }
    /// Throws ValidationError on negative bounds or a dimension above kMaxOracleDimension.
    void validate() const;

    /// Default margin for the chain (m, n): (m + 3, n + 3).
    [[nodiscard]] static FockTruncation for_chain(int m, int n);
};

/// Flat index: ion product index varies fastest, then phonons, then photons.
[[nodiscard]] std::size_t full_index(const FockTruncation& tr, int ion_index, int phonons, int photons);

struct FullState {
    FockTruncation truncation;
    Eigen::VectorXcd amplitudes;
};

/// |ions> (x) |phonons, photons> for an arbitrary normalized internal state
/// given in product order.
[[nodiscard]] FullState product_state(const FockTruncation& tr, const IonVector& ions, int phonons,
                                      int photons);

/// Matrix of s+ b a + s- b^dag a^dag in units of hbar g eta. Real symmetric.
[[nodiscard]] Eigen::MatrixXd build_hamiltonian(const FockTruncation& tr);

/// Thrown when the boundary Fock levels pick up population.
class TruncationError : public std::runtime_error {
public:
    TruncationError(const std::string& what, double leakage)
        : std::runtime_error(what), leakage_(leakage) {}
    [[nodiscard]] double leakage() const noexcept { return leakage_; }

private:
    double leakage_;
};

/// Population allowed on the outermost phonon or photon level.
inline constexpr double kBoundaryTolerance = 1e-12;

/// Hamiltonian plus its eigendecomposition; build once, propagate many times.
class Propagator {
public:
    explicit Propagator(const FockTruncation& tr);

    /// exp(-i H tau) |initial>. Throws ValidationError for a non-normalized or
    /// mis-sized state and TruncationError when the boundary population
    /// exceeds kBoundaryTolerance.
    [[nodiscard]] FullState propagate(const FullState& initial, double tau) const;

    [[nodiscard]] const FockTruncation& truncation() const noexcept { return truncation_; }
    [[nodiscard]] const Eigen::MatrixXd& hamiltonian() const noexcept { return hamiltonian_; }

private:
    FockTruncation truncation_;
    Eigen::MatrixXd hamiltonian_;
    Eigen::VectorXd energies_;
    Eigen::MatrixXd modes_;
};

/// One-shot propagation: decomposes h on every call.
[[nodiscard]] FullState propagate(const Eigen::MatrixXd& h, const FullState& initial, double tau);

/// Population on the outermost phonon or photon level.
[[nodiscard]] double boundary_population(const FullState& state);

/// Expectations of (ion excitations + phonons) and (ion excitations + photons),
/// both conserved by the interaction.
[[nodiscard]] std::pair<double, double> conserved_quantities(const FullState& state);

/// Largest |matrix element| between the sigma = 3 and sigma = 1 sectors after
/// rotating the ions into the coupled basis.
[[nodiscard]] double sigma_sector_coupling(const Eigen::MatrixXd& h, const FockTruncation& tr);

inline constexpr double kChainResidualTolerance = 1e-10;

struct ChainProjection {
    AmplitudeSet amplitudes;
    /// Squared norm outside the four chain states.
    double residual = 0.0;
    [[nodiscard]] bool consistent() const noexcept { return residual < kChainResidualTolerance; }
};

/// Projects onto |000;m+1,n+1>, |W1;m,n>, |W2;m-1,n-1>, |111;m-2,n-2>, with
/// the amplitude roles of the given preparation.
[[nodiscard]] ChainProjection extract_chain_amplitudes(const FullState& state, int m, int n,
                                                       Preparation prep = Preparation::AllGround);

/// Oracle for one SimulationConfig: builds the truncated space, the initial
/// product state and the propagator once.
class ChainOracle {
public:
    explicit ChainOracle(const SimulationConfig& cfg);

    [[nodiscard]] FullState state(double tau) const;
    [[nodiscard]] ChainProjection chain(double tau) const;
    [[nodiscard]] const Propagator& propagator() const noexcept { return propagator_; }
    [[nodiscard]] const FullState& initial() const noexcept { return initial_; }

private:
    SimulationConfig config_;
    ChainLabels labels_;
    Propagator propagator_;
    FullState initial_;
};

} // namespace ioncav
