#include "ioncav/dynamics.hpp"

#include "ioncav/basis.hpp"

#include <boost/math/tools/minima.hpp>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

namespace ioncav {

namespace {

constexpr Complex kI{0.0, 1.0};

// Radicands that are analytically >= 0 can come out as -1e-16 after rounding.
double clamped_sqrt(double x) { return x > 0.0 ? std::sqrt(x) : 0.0; }

void require_finite(double v, const char* what) {
    if (!std::isfinite(v)) {
        throw ValidationError(std::string(what) + " must be finite");
    }
}

} // namespace

std::string to_string(Preparation p) {
    return p == Preparation::AllGround ? "ground" : "excited";
}

Preparation parse_preparation(const std::string& text) {
    if (text == "ground") {
        return Preparation::AllGround;
    }
    if (text == "excited") {
        return Preparation::AllExcited;
    }
    throw ValidationError("unknown preparation '" + text + "' (expected ground|excited)");
}

std::vector<std::string> SimulationConfig::validate() const {
    require_finite(g, "g");
    require_finite(eta, "eta");
    require_finite(nu, "nu");
    require_finite(omega_c, "omega_c");
    require_finite(omega0, "omega0");
    if (g <= 0.0) {
        throw ValidationError("g must be positive");
    }
    if (eta <= 0.0) {
        throw ValidationError("eta must be positive");
    }
    if (phonons0 < 0 || photons0 < 0) {
        throw ValidationError("initial phonon and photon counts must be non-negative");
    }
    std::vector<std::string> warnings;
    if (eta > 0.1) {
        warnings.push_back("eta = " + std::to_string(eta) +
                           " is outside the Lamb-Dicke regime assumed by the model");
    }
    return warnings;
}

ChainLabels SimulationConfig::chain() const noexcept {
    if (preparation == Preparation::AllGround) {
        return {phonons0 - 1, photons0 - 1};
    }
    return {phonons0 + 2, photons0 + 2};
}

SpectralData spectral_from_couplings(double A, double B, double C) {
    SpectralData s;
    s.A = A;
    s.B = B;
    s.C = C;
    s.mu = A * A + B * B + C * C;
    s.beta = clamped_sqrt(s.mu * s.mu - 4.0 * A * A * C * C);
    s.mu1 = s.mu - 2.0 * A * A;
    s.mu2 = s.mu - 2.0 * C * C;
    const double slow = clamped_sqrt(s.mu - s.beta);
    const double fast = clamped_sqrt(s.mu + s.beta);
    s.eigenvalues = {-slow, slow, -fast, fast};
    s.dim = 1;
    if (C > 0.0) {
        ++s.dim;
        if (B > 0.0) {
            ++s.dim;
            if (A > 0.0) {
                ++s.dim;
            }
        }
    }
    return s;
}

BlockHamiltonian block_hamiltonian(int m, int n) {
    const double A = (m >= 1 && n >= 1) ? std::sqrt(1.5 * (m - 1) * (n - 1)) : 0.0;
    const double B = (m >= 0 && n >= 0) ? std::sqrt(2.0 * m * n) : 0.0;
    const double C = (m >= -1 && n >= -1) ? std::sqrt(1.5 * (m + 1) * (n + 1)) : 0.0;

    BlockHamiltonian out;
    out.spectral = spectral_from_couplings(A, B, C);
    const double r2 = std::numbers::sqrt2;
    out.matrix << 0, r2 * A, 0, 0,
                  r2 * A, 0, r2 * B, 0,
                  0, r2 * B, 0, r2 * C,
                  0, 0, r2 * C, 0;
    return out;
}

Eigen::Matrix4d block_matrix_ground_up(const SpectralData& s) {
    const double r2 = std::numbers::sqrt2;
    Eigen::Matrix4d h;
    h << 0, r2 * s.C, 0, 0,
         r2 * s.C, 0, r2 * s.B, 0,
         0, r2 * s.B, 0, r2 * s.A,
         0, 0, r2 * s.A, 0;
    return h;
}

SpectralUnitary spectral_unitary(const SpectralData& s) {
    SpectralUnitary out;
    if (s.beta <= kDegenerateBeta) {
        Eigen::SelfAdjointEigenSolver<Eigen::Matrix4d> solver(block_matrix_ground_up(s));
        out.matrix = solver.eigenvectors().transpose();
        for (int k = 0; k < 4; ++k) {
            out.eigenvalues[k] = solver.eigenvalues()[k];
        }
        out.numeric_fallback = true;
        return out;
    }
    const double q = 4.0 * s.beta;
    const double pp2 = clamped_sqrt((s.beta + s.mu2) / q);
    const double pm2 = clamped_sqrt((s.beta - s.mu2) / q);
    const double pp1 = clamped_sqrt((s.beta + s.mu1) / q);
    const double pm1 = clamped_sqrt((s.beta - s.mu1) / q);
    out.matrix << pp2, -pm1, -pm2, pp1,
                  -pp2, -pm1, pm2, pp1,
                  -pm2, pp1, -pp2, pm1,
                  pm2, pp1, pp2, pm1;
    out.eigenvalues = s.eigenvalues;
    return out;
}

Eigen::Vector4cd evolve_chain(const SpectralData& s, const Eigen::Vector4cd& initial, double tau) {
    const SpectralUnitary u = spectral_unitary(s);
    const Eigen::Matrix4cd uc = u.matrix.cast<Complex>();
    Eigen::Vector4cd in_eigenbasis = uc * initial;
    for (int k = 0; k < 4; ++k) {
        in_eigenbasis[k] *= std::exp(-kI * u.eigenvalues[k] * tau);
    }
    return uc.transpose() * in_eigenbasis;
}

std::array<Complex, 4> AmplitudeSet::logical() const noexcept {
    if (preparation == Preparation::AllGround) {
        return a;
    }
    return {a[3], a[2], a[1], a[0]};
}

double AmplitudeSet::norm_squared() const noexcept {
    double sum = 0.0;
    for (const auto& c : a) {
        sum += std::norm(c);
    }
    return sum;
}

std::array<Complex, 4> chain_coefficients(const SpectralData& s, double tau) {
    if (s.beta <= kDegenerateBeta) {
        const Eigen::Vector4cd v = evolve_chain(s, Eigen::Vector4cd::Unit(0), tau);
        return {v[0], v[1], v[2], v[3]};
    }
    const double b = s.beta;
    const double fast = std::sqrt(s.mu + b);
    const double slow = clamped_sqrt(s.mu - b);
    const double cf = std::cos(fast * tau);
    const double cs = std::cos(slow * tau);
    const double sf = std::sin(fast * tau);
    const double ss = std::sin(slow * tau);

    const double bm2 = std::max(b - s.mu2, 0.0);
    const double bp2 = std::max(b + s.mu2, 0.0);
    const double bm1 = std::max(b - s.mu1, 0.0);
    const double bp1 = std::max(b + s.mu1, 0.0);
    const double inv = 1.0 / (2.0 * b);

    const double a0 = inv * (bm2 * cf + bp2 * cs);
    const double a1 = -inv * (std::sqrt(bm2 * bp1) * sf + std::sqrt(bp2 * bm1) * ss);
    const double a2 = inv * clamped_sqrt(b * b - s.mu2 * s.mu2) * (cf - cs);
    const double a3 = -inv * (std::sqrt(bm2 * bm1) * sf - std::sqrt(bp2 * bp1) * ss);
    return {Complex(a0, 0.0), Complex(0.0, a1), Complex(a2, 0.0), Complex(0.0, a3)};
}

AmplitudeSet amplitudes_ground(int m, int n, double tau) {
    if (m < -1 || n < -1) {
        throw ValidationError("amplitudes_ground: m and n must be >= -1");
    }
    AmplitudeSet out;
    out.a = chain_coefficients(block_hamiltonian(m, n).spectral, tau);
    out.tau = tau;
    out.preparation = Preparation::AllGround;
    return out;
}

namespace {

SpectralData reversed_chain(int phonons, int photons) {
    const SpectralData s = block_hamiltonian(phonons + 2, photons + 2).spectral;
    return spectral_from_couplings(s.C, s.B, s.A);
}

} // namespace

AmplitudeSet amplitudes_excited(int phonons, int photons, double tau) {
    if (phonons < 0 || photons < 0) {
        throw ValidationError("amplitudes_excited: phonon and photon counts must be >= 0");
    }
    AmplitudeSet out;
    out.a = chain_coefficients(reversed_chain(phonons, photons), tau);
    out.tau = tau;
    out.preparation = Preparation::AllExcited;
    return out;
}

double global_phase_frequency(const SimulationConfig& cfg) {
    const double p = cfg.phonons0;
    const double q = cfg.photons0;
    const double ions = cfg.preparation == Preparation::AllGround ? -1.5 : 1.5;
    return cfg.nu * (p + 0.5) + cfg.omega_c * q + ions * cfg.omega0;
}

AmplitudeSet amplitudes(const SimulationConfig& cfg, double tau) {
    AmplitudeSet out = cfg.preparation == Preparation::AllGround
                           ? amplitudes_ground(cfg.phonons0 - 1, cfg.photons0 - 1, tau)
                           : amplitudes_excited(cfg.phonons0, cfg.photons0, tau);
    if (cfg.include_global_phase) {
        const double t = tau / (cfg.g * cfg.eta);
        const Complex phase = std::exp(-kI * global_phase_frequency(cfg) * t);
        for (auto& c : out.a) {
            c *= phase;
        }
    }
    return out;
}

std::array<double, 4> probabilities(const AmplitudeSet& a) {
    const auto c = a.logical();
    return {std::norm(c[0]), std::norm(c[1]), std::norm(c[2]), std::norm(c[3])};
}

CompositeVector composite_state(const AmplitudeSet& a) {
    const auto c = a.logical();
    const double r3 = 1.0 / std::sqrt(3.0);
    CompositeVector v = CompositeVector::Zero();
    v[composite_index(0, 0, 0, 0)] = c[0];
    v[composite_index(1, 0, 0, 1)] = r3 * c[1];
    v[composite_index(0, 1, 0, 1)] = r3 * c[1];
    v[composite_index(0, 0, 1, 1)] = r3 * c[1];
    v[composite_index(1, 1, 0, 2)] = r3 * c[2];
    v[composite_index(1, 0, 1, 2)] = r3 * c[2];
    v[composite_index(0, 1, 1, 2)] = r3 * c[2];
    v[composite_index(1, 1, 1, 3)] = c[3];
    return v;
}

CompositeVector composite_state(const SimulationConfig& cfg, double tau) {
    return composite_state(amplitudes(cfg, tau));
}

AmplitudeSet w_window_amplitudes(const SimulationConfig& cfg) {
    cfg.validate();
    const SpectralData s = cfg.preparation == Preparation::AllGround
                               ? block_hamiltonian(cfg.phonons0 - 1, cfg.photons0 - 1).spectral
                               : reversed_chain(cfg.phonons0, cfg.photons0);
    if (s.beta <= kDegenerateBeta) {
        throw ValidationError("w_window_amplitudes: frozen chain has no W window");
    }
    const double b = s.beta;
    const double bm2 = std::max(b - s.mu2, 0.0);
    const double bp2 = std::max(b + s.mu2, 0.0);
    const double bm1 = std::max(b - s.mu1, 0.0);
    const double bp1 = std::max(b + s.mu1, 0.0);
    const double inv = 1.0 / (2.0 * b);

    AmplitudeSet out;
    out.preparation = cfg.preparation;
    out.tau = std::numeric_limits<double>::quiet_NaN();
    out.a[1] = Complex(0.0, -inv * (std::sqrt(bm2 * bp1) + std::sqrt(bp2 * bm1)));
    out.a[3] = Complex(0.0, -inv * (std::sqrt(bm2 * bm1) - std::sqrt(bp2 * bp1)));
    return out;
}

double w1_generation_time(int n_photons, double g, double eta) {
    if (n_photons < 1) {
        throw ValidationError("w1_generation_time: the cavity must hold at least one photon");
    }
    if (!(g > 0.0) || !(eta > 0.0)) {
        throw ValidationError("w1_generation_time: g and eta must be positive");
    }
    return std::numbers::pi / (2.0 * g * eta * std::sqrt(3.0 * n_photons));
}

double w2_peak_probability(int n) {
    if (n < 0) {
        throw ValidationError("w2_peak_probability: n must be non-negative");
    }
    const double x = n;
    return 24.0 * x * (x + 1.0) / ((5.0 * x + 3.0) * (5.0 * x + 3.0));
}

PopulationPeak locate_population_peak(const SimulationConfig& cfg, int excitations,
                                      double tau_lo, double tau_hi, int scan_points) {
    if (excitations < 0 || excitations > 3) {
        throw ValidationError("locate_population_peak: excitation count must be in 0..3");
    }
    if (!(tau_lo < tau_hi) || scan_points < 2) {
        throw ValidationError("locate_population_peak: need tau_lo < tau_hi and >= 2 points");
    }
    cfg.validate();
    auto population = [&](double tau) { return probabilities(amplitudes(cfg, tau))[excitations]; };

    const double h = (tau_hi - tau_lo) / (scan_points - 1);
    int best = 0;
    double best_p = -1.0;
    for (int k = 0; k < scan_points; ++k) {
        const double p = population(tau_lo + k * h);
        if (p > best_p) {
            best_p = p;
            best = k;
        }
    }
    const double lo = std::max(tau_lo, tau_lo + (best - 1) * h);
    const double hi = std::min(tau_hi, tau_lo + (best + 1) * h);
    const auto [tau, neg_p] = boost::math::tools::brent_find_minima(
        [&](double t) { return -population(t); }, lo, hi, std::numeric_limits<double>::digits / 2);
    if (-neg_p >= best_p) {
        return {tau, -neg_p};
    }
    return {tau_lo + best * h, best_p};
}

} // namespace ioncav
