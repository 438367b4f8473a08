#pragma once

// Partial transposes and negativities of multipartite density matrices.
//
// The global partial transpose with respect to subsystem p splits into K-way
// pieces (only matrix elements whose bra and ket differ in exactly K
// subsystems are transposed):
//
//     rho^{T_p}_G = sum_{K=2..N} rho^{T_p}_K - (N-2) rho
//
// Sandwiching every piece between the negative eigenspace of rho^{T_p}_G
// splits the global negativity into partial K-way negativities,
//
//     N_G^p = E_2^p + ... + E_N^p - E_0^p.
//
// Both identities need the one-way coherences of p (bra and ket differing in
// p alone) to be real; see SubsystemNegativity::one_way.

#include "ioncav/dynamics.hpp"
#include "ioncav/types.hpp"

#include <array>
#include <cstddef>
#include <optional>
#include <string>
#include <vector>

namespace ioncav {

namespace party {
inline constexpr std::size_t A = 0;
inline constexpr std::size_t B = 1;
inline constexpr std::size_t C = 2;
inline constexpr std::size_t D = 3;
} // namespace party

/// Tensor-product layout; the first subsystem is the most significant digit
/// of the flat index.
class SubsystemLayout {
public:
    explicit SubsystemLayout(std::vector<int> dims);

    /// (2, 2, 2, 4): ions A, B, C and the photon-phonon system D.
    [[nodiscard]] static const SubsystemLayout& four_party();

    [[nodiscard]] std::size_t parties() const noexcept { return dims_.size(); }
    [[nodiscard]] int dim(std::size_t p) const { return dims_.at(p); }
    [[nodiscard]] std::size_t total() const noexcept { return total_; }
    [[nodiscard]] const std::vector<int>& dims() const noexcept { return dims_; }

    /// Digit of subsystem p in the flat index.
    [[nodiscard]] int digit(std::size_t flat, std::size_t p) const noexcept {
        return static_cast<int>((flat / strides_[p]) % static_cast<std::size_t>(dims_[p]));
    }
    /// Flat index with the digit of subsystem p replaced.
    [[nodiscard]] std::size_t with_digit(std::size_t flat, std::size_t p, int value) const noexcept {
        return flat + (static_cast<std::size_t>(value) - static_cast<std::size_t>(digit(flat, p))) *
                          strides_[p];
    }

    friend bool operator==(const SubsystemLayout& x, const SubsystemLayout& y) {
        return x.dims_ == y.dims_;
    }

private:
    std::vector<int> dims_;
    std::vector<std::size_t> strides_;
    std::size_t total_ = 1;
};

/// Hermitian, unit-trace, positive semidefinite operator on a SubsystemLayout.
class DensityMatrix {
public:
    /// Validates Hermiticity and trace to 1e-12 and eigenvalues >= -1e-10.
    DensityMatrix(Eigen::MatrixXcd rho, SubsystemLayout layout);

    /// |psi><psi|. Throws ValidationError unless |psi| = 1 within kNormTolerance.
    [[nodiscard]] static DensityMatrix from_pure(const Eigen::VectorXcd& psi, SubsystemLayout layout);

    [[nodiscard]] const Eigen::MatrixXcd& matrix() const noexcept { return rho_; }
    [[nodiscard]] const SubsystemLayout& layout() const noexcept { return layout_; }

private:
    struct Unchecked {};
    DensityMatrix(Eigen::MatrixXcd rho, SubsystemLayout layout, Unchecked);

    Eigen::MatrixXcd rho_;
    SubsystemLayout layout_;
};

/// Four-party density matrix of a logical state on the (2, 2, 2, 4) layout.
[[nodiscard]] DensityMatrix density_from_pure(const CompositeVector& state);

/// 8x8 operator on ions A, B, C (A most significant, same as the four-party layout).
using ReducedIonState = Eigen::Matrix<Complex, 8, 8>;

/// Trace over every subsystem not listed in keep (keep must be increasing).
[[nodiscard]] Eigen::MatrixXcd partial_trace(const DensityMatrix& rho, const std::vector<std::size_t>& keep);

/// Trace over D of a four-party density matrix.
[[nodiscard]] ReducedIonState reduce_to_ions(const DensityMatrix& rho);

/// <000|r|000>, <W1|r|W1>, <W2|r|W2>, <111|r|111>.
[[nodiscard]] std::array<double, 4> ion_mixture_weights(const ReducedIonState& r);

using Triple = std::array<std::size_t, 3>;

struct TransposeSpec {
    enum class Kind { Global, KWay, Constrained3 };

    Kind kind = Kind::Global;
    /// Transposed subsystem(s). KWay and Constrained3 take exactly one.
    std::vector<std::size_t> parties;
    int k = 0;
    Triple triple{};

    [[nodiscard]] static TransposeSpec global(std::size_t p) { return {Kind::Global, {p}, 0, {}}; }
    [[nodiscard]] static TransposeSpec global(std::vector<std::size_t> ps) {
        return {Kind::Global, std::move(ps), 0, {}};
    }
    [[nodiscard]] static TransposeSpec kway(std::size_t p, int k) { return {Kind::KWay, {p}, k, {}}; }
    [[nodiscard]] static TransposeSpec constrained3(std::size_t p, Triple t) {
        return {Kind::Constrained3, {p}, 3, t};
    }

    /// Throws ValidationError if it does not fit the layout.
    void validate(const SubsystemLayout& layout) const;
};

/// Element-wise partial transpose. Global transposes the listed subsystems
/// everywhere; KWay only where exactly k subsystems differ between bra and
/// ket; Constrained3 only where the differing subsystems are exactly the triple.
[[nodiscard]] Eigen::MatrixXcd partial_transpose(const DensityMatrix& rho, const TransposeSpec& spec);

/// (||pt||_1 - 1) / (d_p - 1). Throws ValidationError when pt is not Hermitian
/// to 1e-10, its trace is not 1, or d_p < 2.
[[nodiscard]] double negativity(const Eigen::MatrixXcd& pt, int d_p);

/// Eigenvalues below this count as negative.
inline constexpr double kNegativeEigenvalueThreshold = -1e-12;

struct ConstrainedValue {
    Triple triple{};
    double value = 0.0;
};

/// Global negativity of one subsystem and its K-way split.
struct SubsystemNegativity {
    std::size_t party = 0;
    int d_p = 2;
    double global = 0.0;
    /// partial[K - 2] = E_K for K = 2..N.
    std::vector<double> partial;
    /// E_0, the sandwich of rho itself weighted by (N - 2).
    double residual = 0.0;
    /// Sandwich of rho_G - sum_K rho_K + (N-2) rho. The K-way pieces leave
    /// elements that differ only in p untouched while the global transpose
    /// conjugates them, so this is zero exactly when those coherences are real.
    double one_way = 0.0;
    /// E_3 restricted to each triple that contains the party (empty unless requested).
    std::vector<ConstrainedValue> constrained;

    [[nodiscard]] double e(int k) const;
    [[nodiscard]] double reconstructed() const;
    [[nodiscard]] std::optional<double> constrained_value(Triple t) const;
};

/// Global negativity of party p and the partial K-way negativities E_2..E_N, E_0.
/// The sums run over the negative eigenspace of the global transpose via its
/// projector, so degenerate eigenvalues need no basis choice.
[[nodiscard]] SubsystemNegativity partial_kway_negativities(const DensityMatrix& rho, std::size_t p);

/// E_3^{p-XYZ} for every triple XYZ that contains p.
[[nodiscard]] std::vector<ConstrainedValue> constrained_3way_negativities(const DensityMatrix& rho,
                                                                          std::size_t p);

/// Both of the above from a single eigendecomposition.
[[nodiscard]] SubsystemNegativity subsystem_negativities(const DensityMatrix& rho, std::size_t p,
                                                         bool with_constrained);

/// Global negativity across the cut (parties) | rest; d_p is the product of their dimensions.
[[nodiscard]] double group_negativity(const DensityMatrix& rho, const std::vector<std::size_t>& parties);

/// "ABD" style label for a triple on the four-party layout.
[[nodiscard]] std::string triple_name(const Triple& t);

/// Closed-form negativities of the chain states, in terms of the logical
/// weights q_i = |c_i|^2 of (|000>, |W1>, |W2>, |111>).
///
/// E2^A uses the bracket q0 q1/3 + q2 q3/3 + (2/9)(q1^2 + q1 q2 + q2^2); with
/// it E2^A + E3^A + E4^A equals N_G^A identically. N_G^D is
/// (2/3) sum_{i<j} |c_i||c_j|, the sum of the three E_K^D terms.
struct AnalyticNegativities {
    double ng_a = 0.0;
    double e2_a = 0.0;
    double e3_a = 0.0;
    double e4_a = 0.0;
    double ng_d = 0.0;
    double e2_d = 0.0;
    double e3_d = 0.0;
    double e4_d = 0.0;
    double ng_ab = 0.0;
    // Constrained three-way values for qubit A: ABC carries nothing, the two
    // triples with D share E3^A equally.
    double e3_a_abc = 0.0;
    double e3_a_abd = 0.0;
    double e3_a_acd = 0.0;
};

/// Below this N_G^A the E_K^A ratios are reported as 0.
inline constexpr double kSeparableThreshold = 1e-12;

[[nodiscard]] AnalyticNegativities analytic_negativities(const AmplitudeSet& a);

struct NegativityReport {
    double tau = 0.0;
    SubsystemNegativity a;  // qubit A, with ABC/ABD/ACD constrained terms
    SubsystemNegativity d;  // photon-phonon system, with ABD/ACD/BCD constrained terms
    double ng_ab = 0.0;
    AnalyticNegativities analytic;
    /// |numeric - analytic| per quantity.
    AnalyticNegativities discrepancy;
    [[nodiscard]] double max_discrepancy() const;
};

[[nodiscard]] NegativityReport entanglement_report(const AmplitudeSet& a);
[[nodiscard]] NegativityReport entanglement_report(const SimulationConfig& cfg, double tau);

} // namespace ioncav
