#include "ioncav/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace ioncav {

namespace {

constexpr Complex kI{0.0, 1.0};

void check_state(const FullState& s) {
    if (s.amplitudes.size() != static_cast<Eigen::Index>(s.truncation.dimension())) {
        throw ValidationError("full state size does not match its truncation");
    }
    const double norm = s.amplitudes.norm();
    if (std::abs(norm - 1.0) > kNormTolerance) {
        throw ValidationError("full state norm " + std::to_string(norm) + " differs from 1");
    }
}

template <typename F>
void for_each_level(const FockTruncation& tr, F&& f) {
    for (int q = 0; q <= tr.max_photons; ++q) {
        for (int p = 0; p <= tr.max_phonons; ++p) {
            for (int ion = 0; ion < 8; ++ion) {
                f(ion, p, q);
            }
        }
    }
}

} // namespace

void FockTruncation::validate() const {
    if (max_phonons < 0 || max_photons < 0) {
        throw ValidationError("FockTruncation: bounds must be non-negative");
    }
    if (dimension() > kMaxOracleDimension) {
        throw ValidationError("FockTruncation: dimension " + std::to_string(dimension()) +
                              " exceeds " + std::to_string(kMaxOracleDimension));
    }
}

FockTruncation FockTruncation::for_chain(int m, int n) {
    return {std::max(m + 3, 0), std::max(n + 3, 0)};
}

std::size_t full_index(const FockTruncation& tr, int ion_index, int phonons, int photons) {
    if (ion_index < 0 || ion_index > 7 || phonons < 0 || phonons > tr.max_phonons || photons < 0 ||
        photons > tr.max_photons) {
        throw ValidationError("full_index: component out of range");
    }
    return static_cast<std::size_t>(ion_index) +
           8 * (static_cast<std::size_t>(phonons) +
                static_cast<std::size_t>(tr.max_phonons + 1) * static_cast<std::size_t>(photons));
}

FullState product_state(const FockTruncation& tr, const IonVector& ions, int phonons, int photons) {
    tr.validate();
    if (std::abs(ions.norm() - 1.0) > kNormTolerance) {
        throw ValidationError("product_state: internal state is not normalized");
    }
    FullState s{tr, Eigen::VectorXcd::Zero(static_cast<Eigen::Index>(tr.dimension()))};
    for (int ion = 0; ion < 8; ++ion) {
        s.amplitudes[static_cast<Eigen::Index>(full_index(tr, ion, phonons, photons))] = ions[ion];
    }
    return s;
}

Eigen::MatrixXd build_hamiltonian(const FockTruncation& tr) {
    tr.validate();
    const auto dim = static_cast<Eigen::Index>(tr.dimension());
    Eigen::MatrixXd h = Eigen::MatrixXd::Zero(dim, dim);
    // s+^{(j)} b a : |ion j down; p, q> -> sqrt(p q) |ion j up; p-1, q-1>
    for_each_level(tr, [&](int ion, int p, int q) {
        if (p == 0 || q == 0) {
            return;
        }
        const auto from = static_cast<Eigen::Index>(full_index(tr, ion, p, q));
        for (int j = 0; j < 3; ++j) {
            if ((ion >> j) & 1) {
                continue;
            }
            const auto to = static_cast<Eigen::Index>(full_index(tr, ion | (1 << j), p - 1, q - 1));
            const double element = std::sqrt(static_cast<double>(p) * q);
            h(to, from) += element;
            h(from, to) += element;
        }
    });
    return h;
}

Propagator::Propagator(const FockTruncation& tr) : truncation_(tr), hamiltonian_(build_hamiltonian(tr)) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(hamiltonian_);
    energies_ = solver.eigenvalues();
    modes_ = solver.eigenvectors();
}

FullState Propagator::propagate(const FullState& initial, double tau) const {
    check_state(initial);
    if (initial.truncation.max_phonons != truncation_.max_phonons ||
        initial.truncation.max_photons != truncation_.max_photons) {
        throw ValidationError("Propagator: state truncation differs from the propagator's");
    }
    Eigen::VectorXcd weights = modes_.transpose().cast<Complex>() * initial.amplitudes;
    for (Eigen::Index k = 0; k < weights.size(); ++k) {
        weights[k] *= std::exp(-kI * energies_[k] * tau);
    }
    FullState out{truncation_, modes_.cast<Complex>() * weights};
    const double leak = std::max(boundary_population(initial), boundary_population(out));
    if (leak > kBoundaryTolerance) {
        throw TruncationError("boundary Fock levels carry population " + std::to_string(leak), leak);
    }
    return out;
}

FullState propagate(const Eigen::MatrixXd& h, const FullState& initial, double tau) {
    const auto dim = static_cast<Eigen::Index>(initial.truncation.dimension());
    if (h.rows() != dim || h.cols() != dim) {
        throw ValidationError("propagate: Hamiltonian size does not match the state");
    }
    check_state(initial);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(h);
    Eigen::VectorXcd weights = solver.eigenvectors().transpose().cast<Complex>() * initial.amplitudes;
    for (Eigen::Index k = 0; k < weights.size(); ++k) {
        weights[k] *= std::exp(-kI * solver.eigenvalues()[k] * tau);
    }
    FullState out{initial.truncation, solver.eigenvectors().cast<Complex>() * weights};
    const double leak = boundary_population(out);
    if (leak > kBoundaryTolerance) {
        throw TruncationError("boundary Fock levels carry population " + std::to_string(leak), leak);
    }
    return out;
}

double boundary_population(const FullState& state) {
    const auto& tr = state.truncation;
    double leak = 0.0;
    for_each_level(tr, [&](int ion, int p, int q) {
        if (p == tr.max_phonons || q == tr.max_photons) {
            leak += std::norm(state.amplitudes[static_cast<Eigen::Index>(full_index(tr, ion, p, q))]);
        }
    });
    return leak;
}

std::pair<double, double> conserved_quantities(const FullState& state) {
    double with_phonons = 0.0;
    double with_photons = 0.0;
    for_each_level(state.truncation, [&](int ion, int p, int q) {
        const double w = std::norm(state.amplitudes[static_cast<Eigen::Index>(full_index(state.truncation, ion, p, q))]);
        const int excited = ProductLabel::from_index(ion).excitations();
        with_phonons += w * (excited + p);
        with_photons += w * (excited + q);
    });
    return {with_phonons, with_photons};
}

double sigma_sector_coupling(const Eigen::MatrixXd& h, const FockTruncation& tr) {
    const auto blocks = static_cast<Eigen::Index>(tr.dimension() / 8);
    if (h.rows() != blocks * 8 || h.cols() != blocks * 8) {
        throw ValidationError("sigma_sector_coupling: Hamiltonian size does not match the truncation");
    }
    const auto& t = coupled_transform();
    double worst = 0.0;
    for (Eigen::Index r = 0; r < blocks; ++r) {
        for (Eigen::Index c = 0; c < blocks; ++c) {
            const Eigen::Matrix<double, 8, 8> rotated = t * h.block<8, 8>(8 * r, 8 * c) * t.transpose();
            worst = std::max({worst, rotated.topRightCorner<4, 4>().cwiseAbs().maxCoeff(),
                              rotated.bottomLeftCorner<4, 4>().cwiseAbs().maxCoeff()});
        }
    }
    return worst;
}

ChainProjection extract_chain_amplitudes(const FullState& state, int m, int n, Preparation prep) {
    check_state(state);
    const auto& tr = state.truncation;
    auto overlap = [&](int excitations, int phonons, int photons) -> Complex {
        if (phonons < 0 || photons < 0 || phonons > tr.max_phonons || photons > tr.max_photons) {
            return 0.0;
        }
        const IonVector dicke = dicke_state(excitations);
        Complex sum = 0.0;
        for (int ion = 0; ion < 8; ++ion) {
            sum += std::conj(dicke[ion]) *
                   state.amplitudes[static_cast<Eigen::Index>(full_index(tr, ion, phonons, photons))];
        }
        return sum;
    };

    std::array<Complex, 4> logical{};
    for (int k = 0; k < 4; ++k) {
        logical[static_cast<std::size_t>(k)] = overlap(k, m + 1 - k, n + 1 - k);
    }

    ChainProjection out;
    out.amplitudes.preparation = prep;
    out.amplitudes.tau = 0.0;
    out.amplitudes.a = prep == Preparation::AllGround
                           ? logical
                           : std::array<Complex, 4>{logical[3], logical[2], logical[1], logical[0]};
    out.residual = std::max(0.0, 1.0 - out.amplitudes.norm_squared());
    return out;
}

namespace {

FullState initial_state(const SimulationConfig& cfg, const FockTruncation& tr) {
    const int excitations = cfg.preparation == Preparation::AllGround ? 0 : 3;
    return product_state(tr, dicke_state(excitations), cfg.phonons0, cfg.photons0);
}

} // namespace

ChainOracle::ChainOracle(const SimulationConfig& cfg)
    : config_(cfg),
      labels_(cfg.chain()),
      propagator_(FockTruncation::for_chain(labels_.m, labels_.n)),
      initial_(initial_state(cfg, propagator_.truncation())) {
    config_.validate();
}

FullState ChainOracle::state(double tau) const { return propagator_.propagate(initial_, tau); }

ChainProjection ChainOracle::chain(double tau) const {
    ChainProjection out = extract_chain_amplitudes(state(tau), labels_.m, labels_.n, config_.preparation);
    out.amplitudes.tau = tau;
    return out;
}

} // namespace ioncav
