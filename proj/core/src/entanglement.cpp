#include "ioncav/entanglement.hpp"

#include "ioncav/basis.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace ioncav {

namespace {

constexpr double kHermitianTolerance = 1e-12;
constexpr double kPsdTolerance = 1e-10;

double trace_product(const Eigen::MatrixXcd& p, const Eigen::MatrixXcd& x) {
    return (p.transpose().array() * x.array()).sum().real();
}

double hermitian_defect(const Eigen::MatrixXcd& m) { return (m - m.adjoint()).cwiseAbs().maxCoeff(); }

std::vector<Triple> triples_containing(std::size_t p, std::size_t parties) {
    std::vector<Triple> out;
    for (std::size_t x = 0; x < parties; ++x) {
        for (std::size_t y = x + 1; y < parties; ++y) {
            for (std::size_t z = y + 1; z < parties; ++z) {
                if (x == p || y == p || z == p) {
                    out.push_back({x, y, z});
                }
            }
        }
    }
    return out;
}

} // namespace

// ---------------------------------------------------------------------------

SubsystemLayout::SubsystemLayout(std::vector<int> dims) : dims_(std::move(dims)) {
    if (dims_.empty()) {
        throw ValidationError("SubsystemLayout: at least one subsystem required");
    }
    strides_.assign(dims_.size(), 1);
    for (std::size_t p = dims_.size(); p-- > 0;) {
        if (dims_[p] < 2) {
            throw ValidationError("SubsystemLayout: subsystem dimensions must be >= 2");
        }
        strides_[p] = total_;
        total_ *= static_cast<std::size_t>(dims_[p]);
    }
}

const SubsystemLayout& SubsystemLayout::four_party() {
    static const SubsystemLayout layout(
        std::vector<int>(kCompositeDims.begin(), kCompositeDims.end()));
    return layout;
}

// ---------------------------------------------------------------------------

DensityMatrix::DensityMatrix(Eigen::MatrixXcd rho, SubsystemLayout layout, Unchecked)
    : rho_(std::move(rho)), layout_(std::move(layout)) {}

DensityMatrix::DensityMatrix(Eigen::MatrixXcd rho, SubsystemLayout layout)
    : rho_(std::move(rho)), layout_(std::move(layout)) {
    const auto n = static_cast<Eigen::Index>(layout_.total());
    if (rho_.rows() != n || rho_.cols() != n) {
        throw ValidationError("DensityMatrix: matrix size does not match the layout");
    }
    if (hermitian_defect(rho_) > kHermitianTolerance) {
        throw ValidationError("DensityMatrix: matrix is not Hermitian");
    }
    if (std::abs(rho_.trace() - Complex(1.0)) > kHermitianTolerance) {
        throw ValidationError("DensityMatrix: trace differs from 1");
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(rho_, Eigen::EigenvaluesOnly);
    if (solver.eigenvalues().minCoeff() < -kPsdTolerance) {
        throw ValidationError("DensityMatrix: matrix is not positive semidefinite");
    }
}

DensityMatrix DensityMatrix::from_pure(const Eigen::VectorXcd& psi, SubsystemLayout layout) {
    if (psi.size() != static_cast<Eigen::Index>(layout.total())) {
        throw ValidationError("DensityMatrix::from_pure: vector size does not match the layout");
    }
    const double norm = psi.norm();
    if (std::abs(norm - 1.0) > kNormTolerance) {
        throw ValidationError("DensityMatrix::from_pure: state norm " + std::to_string(norm) +
                              " differs from 1");
    }
    return DensityMatrix(psi * psi.adjoint(), std::move(layout), Unchecked{});
}

DensityMatrix density_from_pure(const CompositeVector& state) {
    return DensityMatrix::from_pure(state, SubsystemLayout::four_party());
}

// ---------------------------------------------------------------------------

Eigen::MatrixXcd partial_trace(const DensityMatrix& rho, const std::vector<std::size_t>& keep) {
    const auto& layout = rho.layout();
    if (keep.empty() || !std::is_sorted(keep.begin(), keep.end()) ||
        std::adjacent_find(keep.begin(), keep.end()) != keep.end() ||
        keep.back() >= layout.parties()) {
        throw ValidationError("partial_trace: keep must list distinct subsystems in increasing order");
    }
    std::vector<int> kept_dims;
    for (auto p : keep) {
        kept_dims.push_back(layout.dim(p));
    }
    const SubsystemLayout reduced(kept_dims);
    auto reduced_index = [&](std::size_t flat) {
        std::size_t r = 0;
        for (std::size_t k = 0; k < keep.size(); ++k) {
            r = r * static_cast<std::size_t>(kept_dims[k]) + static_cast<std::size_t>(layout.digit(flat, keep[k]));
        }
        return r;
    };
    auto traced_equal = [&](std::size_t i, std::size_t j) {
        for (std::size_t p = 0; p < layout.parties(); ++p) {
            if (!std::binary_search(keep.begin(), keep.end(), p) && layout.digit(i, p) != layout.digit(j, p)) {
                return false;
            }
        }
        return true;
    };

    const auto n = static_cast<Eigen::Index>(reduced.total());
    Eigen::MatrixXcd out = Eigen::MatrixXcd::Zero(n, n);
    const auto& m = rho.matrix();
    for (std::size_t i = 0; i < layout.total(); ++i) {
        for (std::size_t j = 0; j < layout.total(); ++j) {
            if (traced_equal(i, j)) {
                out(static_cast<Eigen::Index>(reduced_index(i)), static_cast<Eigen::Index>(reduced_index(j))) +=
                    m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
            }
        }
    }
    return out;
}

ReducedIonState reduce_to_ions(const DensityMatrix& rho) {
    if (!(rho.layout() == SubsystemLayout::four_party())) {
        throw ValidationError("reduce_to_ions: expects the (2,2,2,4) layout");
    }
    return partial_trace(rho, {party::A, party::B, party::C});
}

std::array<double, 4> ion_mixture_weights(const ReducedIonState& r) {
    // Dicke states are permutation symmetric, so product order and layout order coincide.
    std::array<double, 4> w{};
    for (int k = 0; k < 4; ++k) {
        const IonVector v = dicke_state(k);
        w[static_cast<std::size_t>(k)] = (v.adjoint() * r * v)(0, 0).real();
    }
    return w;
}

// ---------------------------------------------------------------------------

void TransposeSpec::validate(const SubsystemLayout& layout) const {
    const std::size_t n = layout.parties();
    if (parties.empty()) {
        throw ValidationError("TransposeSpec: no subsystem to transpose");
    }
    for (std::size_t i = 0; i < parties.size(); ++i) {
        if (parties[i] >= n) {
            throw ValidationError("TransposeSpec: subsystem index out of range");
        }
        for (std::size_t j = i + 1; j < parties.size(); ++j) {
            if (parties[i] == parties[j]) {
                throw ValidationError("TransposeSpec: repeated subsystem");
            }
        }
    }
    switch (kind) {
    case Kind::Global:
        break;
    case Kind::KWay:
        if (parties.size() != 1) {
            throw ValidationError("TransposeSpec: K-way transpose takes one subsystem");
        }
        if (k < 2 || static_cast<std::size_t>(k) > n) {
            throw ValidationError("TransposeSpec: K must lie in 2..N");
        }
        break;
    case Kind::Constrained3: {
        if (parties.size() != 1) {
            throw ValidationError("TransposeSpec: constrained transpose takes one subsystem");
        }
        if (n < 3) {
            throw ValidationError("TransposeSpec: constrained transpose needs at least 3 subsystems");
        }
        const auto& t = triple;
        if (t[0] == t[1] || t[0] == t[2] || t[1] == t[2] || t[0] >= n || t[1] >= n || t[2] >= n) {
            throw ValidationError("TransposeSpec: triple must hold three distinct subsystems");
        }
        if (std::find(t.begin(), t.end(), parties.front()) == t.end()) {
            throw ValidationError("TransposeSpec: triple must contain the transposed subsystem");
        }
        break;
    }
    }
}

Eigen::MatrixXcd partial_transpose(const DensityMatrix& rho, const TransposeSpec& spec) {
    const auto& layout = rho.layout();
    spec.validate(layout);
    const std::size_t n = layout.total();
    const std::size_t parties = layout.parties();

    unsigned triple_mask = 0;
    if (spec.kind == TransposeSpec::Kind::Constrained3) {
        for (auto p : spec.triple) {
            triple_mask |= 1u << p;
        }
    }

    const auto& m = rho.matrix();
    Eigen::MatrixXcd out = m;
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            int differ = 0;
            unsigned mask = 0;
            for (std::size_t p = 0; p < parties; ++p) {
                if (layout.digit(i, p) != layout.digit(j, p)) {
                    ++differ;
                    mask |= 1u << p;
                }
            }
            bool apply = false;
            switch (spec.kind) {
            case TransposeSpec::Kind::Global:
                apply = true;
                break;
            case TransposeSpec::Kind::KWay:
                apply = differ == spec.k;
                break;
            case TransposeSpec::Kind::Constrained3:
                apply = mask == triple_mask;
                break;
            }
            if (!apply) {
                continue;
            }
            std::size_t row = i;
            std::size_t col = j;
            for (auto p : spec.parties) {
                row = layout.with_digit(row, p, layout.digit(j, p));
                col = layout.with_digit(col, p, layout.digit(i, p));
            }
            out(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) =
                m(static_cast<Eigen::Index>(row), static_cast<Eigen::Index>(col));
        }
    }
    return out;
}

double negativity(const Eigen::MatrixXcd& pt, int d_p) {
    if (d_p < 2) {
        throw ValidationError("negativity: subsystem dimension must be >= 2");
    }
    if (pt.rows() != pt.cols() || hermitian_defect(pt) > 1e-10) {
        throw ValidationError("negativity: operator is not Hermitian");
    }
    if (std::abs(pt.trace() - Complex(1.0)) > 1e-10) {
        throw ValidationError("negativity: operator trace differs from 1");
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(pt, Eigen::EigenvaluesOnly);
    return (solver.eigenvalues().cwiseAbs().sum() - 1.0) / (d_p - 1);
}

// ---------------------------------------------------------------------------

double SubsystemNegativity::e(int k) const {
    const auto idx = static_cast<std::size_t>(k - 2);
    if (k < 2 || idx >= partial.size()) {
        throw ValidationError("SubsystemNegativity::e: K out of range");
    }
    return partial[idx];
}

double SubsystemNegativity::reconstructed() const {
    return std::accumulate(partial.begin(), partial.end(), 0.0) - residual;
}

std::optional<double> SubsystemNegativity::constrained_value(Triple t) const {
    std::sort(t.begin(), t.end());
    for (const auto& c : constrained) {
        if (c.triple == t) {
            return c.value;
        }
    }
    return std::nullopt;
}

SubsystemNegativity subsystem_negativities(const DensityMatrix& rho, std::size_t p, bool with_constrained) {
    const auto& layout = rho.layout();
    if (p >= layout.parties()) {
        throw ValidationError("subsystem_negativities: subsystem index out of range");
    }
    const auto n_parties = static_cast<int>(layout.parties());
    const Eigen::MatrixXcd global = partial_transpose(rho, TransposeSpec::global(p));

    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(global);
    const auto& values = solver.eigenvalues();
    std::vector<Eigen::Index> negative;
    double negative_sum = 0.0;
    for (Eigen::Index k = 0; k < values.size(); ++k) {
        if (values[k] < kNegativeEigenvalueThreshold) {
            negative.push_back(k);
            negative_sum += values[k];
        }
    }
    Eigen::MatrixXcd vectors(global.rows(), static_cast<Eigen::Index>(negative.size()));
    for (std::size_t c = 0; c < negative.size(); ++c) {
        vectors.col(static_cast<Eigen::Index>(c)) = solver.eigenvectors().col(negative[c]);
    }
    const Eigen::MatrixXcd projector = vectors * vectors.adjoint();

    SubsystemNegativity out;
    out.party = p;
    out.d_p = layout.dim(p);
    const double scale = -2.0 / (out.d_p - 1);
    out.global = scale * negative_sum;

    Eigen::MatrixXcd defect = global + (n_parties - 2) * rho.matrix();
    for (int k = 2; k <= n_parties; ++k) {
        const Eigen::MatrixXcd piece = partial_transpose(rho, TransposeSpec::kway(p, k));
        out.partial.push_back(scale * trace_product(projector, piece));
        defect -= piece;
    }
    out.residual = scale * (n_parties - 2) * trace_product(projector, rho.matrix());
    out.one_way = scale * trace_product(projector, defect);

    if (with_constrained && n_parties >= 3) {
        for (const auto& t : triples_containing(p, layout.parties())) {
            const Eigen::MatrixXcd piece = partial_transpose(rho, TransposeSpec::constrained3(p, t));
            out.constrained.push_back({t, scale * trace_product(projector, piece)});
        }
    }
    return out;
}

SubsystemNegativity partial_kway_negativities(const DensityMatrix& rho, std::size_t p) {
    return subsystem_negativities(rho, p, false);
}

std::vector<ConstrainedValue> constrained_3way_negativities(const DensityMatrix& rho, std::size_t p) {
    return subsystem_negativities(rho, p, true).constrained;
}

double group_negativity(const DensityMatrix& rho, const std::vector<std::size_t>& parties) {
    const TransposeSpec spec = TransposeSpec::global(parties);
    int d = 1;
    for (auto p : parties) {
        d *= rho.layout().dim(p);
    }
    return negativity(partial_transpose(rho, spec), d);
}

std::string triple_name(const Triple& t) {
    std::string s;
    for (auto p : t) {
        s.push_back(static_cast<char>('A' + p));
    }
    return s;
}

// ---------------------------------------------------------------------------

AnalyticNegativities analytic_negativities(const AmplitudeSet& amps) {
    const auto c = amps.logical();
    std::array<double, 4> q{};
    std::array<double, 4> r{};
    double total = 0.0;
    for (std::size_t i = 0; i < 4; ++i) {
        q[i] = std::norm(c[i]);
        r[i] = std::abs(c[i]);
        total += q[i];
    }
    if (std::abs(total - 1.0) > kNormTolerance) {
        throw ValidationError("analytic_negativities: amplitudes are not normalized");
    }

    AnalyticNegativities out;
    const double lower = q[0] + 2.0 * q[1] / 3.0 + q[2] / 3.0;
    const double upper = q[3] + q[1] / 3.0 + 2.0 * q[2] / 3.0;
    out.ng_a = 2.0 * std::sqrt(std::max(lower * upper, 0.0));
    if (out.ng_a >= kSeparableThreshold) {
        const double f = 4.0 / out.ng_a;
        out.e4_a = f * (q[0] * q[3] + q[1] * q[2] / 3.0);
        out.e3_a = f * (2.0 * q[0] * q[2] / 3.0 + 2.0 * q[1] * q[3] / 3.0);
        out.e2_a = f * (q[0] * q[1] / 3.0 + q[2] * q[3] / 3.0 +
                        2.0 * (q[1] * q[1] + q[1] * q[2] + q[2] * q[2]) / 9.0);
    }
    out.e3_a_abc = 0.0;
    out.e3_a_abd = out.e3_a / 2.0;
    out.e3_a_acd = out.e3_a / 2.0;

    out.e4_d = 2.0 / 3.0 * r[0] * r[3] + 2.0 / 9.0 * r[1] * r[2];
    out.e3_d = 2.0 / 3.0 * r[0] * r[2] + 2.0 / 3.0 * r[1] * r[3];
    out.e2_d = 2.0 / 3.0 * r[0] * r[1] + 2.0 / 3.0 * r[2] * r[3] + 4.0 / 9.0 * r[1] * r[2];
    out.ng_d = 2.0 / 3.0 * (r[0] * (r[1] + r[2] + r[3]) + r[1] * (r[2] + r[3]) + r[2] * r[3]);

    const double mu0 = std::sqrt(q[0] + q[1] / 3.0);
    const double mu1 = std::sqrt(2.0 * q[1] / 3.0 + 2.0 * q[2] / 3.0);
    const double mu2 = std::sqrt(q[3] + q[2] / 3.0);
    out.ng_ab = 2.0 / 3.0 * (mu0 * mu1 + mu0 * mu2 + mu1 * mu2);
    return out;
}

double NegativityReport::max_discrepancy() const {
    const auto& x = discrepancy;
    return std::max({x.ng_a, x.e2_a, x.e3_a, x.e4_a, x.ng_d, x.e2_d, x.e3_d, x.e4_d, x.ng_ab,
                     x.e3_a_abc, x.e3_a_abd, x.e3_a_acd});
}

NegativityReport entanglement_report(const AmplitudeSet& amps) {
    const DensityMatrix rho = density_from_pure(composite_state(amps));

    NegativityReport out;
    out.tau = amps.tau;
    out.a = subsystem_negativities(rho, party::A, true);
    out.d = subsystem_negativities(rho, party::D, true);
    out.ng_ab = group_negativity(rho, {party::A, party::B});
    out.analytic = analytic_negativities(amps);

    const auto& an = out.analytic;
    auto& dv = out.discrepancy;
    dv.ng_a = std::abs(out.a.global - an.ng_a);
    dv.e2_a = std::abs(out.a.e(2) - an.e2_a);
    dv.e3_a = std::abs(out.a.e(3) - an.e3_a);
    dv.e4_a = std::abs(out.a.e(4) - an.e4_a);
    dv.ng_d = std::abs(out.d.global - an.ng_d);
    dv.e2_d = std::abs(out.d.e(2) - an.e2_d);
    dv.e3_d = std::abs(out.d.e(3) - an.e3_d);
    dv.e4_d = std::abs(out.d.e(4) - an.e4_d);
    dv.ng_ab = std::abs(out.ng_ab - an.ng_ab);
    dv.e3_a_abc = std::abs(*out.a.constrained_value({0, 1, 2}) - an.e3_a_abc);
    dv.e3_a_abd = std::abs(*out.a.constrained_value({0, 1, 3}) - an.e3_a_abd);
    dv.e3_a_acd = std::abs(*out.a.constrained_value({0, 2, 3}) - an.e3_a_acd);
    return out;
}

NegativityReport entanglement_report(const SimulationConfig& cfg, double tau) {
    cfg.validate();
    return entanglement_report(amplitudes(cfg, tau));
}

} // namespace ioncav
