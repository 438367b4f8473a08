#pragma once

// Product and coupled bases of the three ionic qubits, and the flat layout of
// the four-party logical space used by the entanglement code.

#include "ioncav/types.hpp"

#include <array>
#include <cstddef>

namespace ioncav {

/// |i1 i2 i3> with 0 = ground and 1 = excited for ions A, B, C.
struct ProductLabel {
    int i1 = 0;
    int i2 = 0;
    int i3 = 0;

    /// Position in the product ordering |000>,|100>,|010>,|110>,|001>,... (i1 varies fastest).
    [[nodiscard]] constexpr int index() const noexcept { return i1 + 2 * i2 + 4 * i3; }
    [[nodiscard]] constexpr int excitations() const noexcept { return i1 + i2 + i3; }
    [[nodiscard]] static constexpr ProductLabel from_index(int k) noexcept {
        return {k & 1, (k >> 1) & 1, (k >> 2) & 1};
    }
    friend constexpr bool operator==(const ProductLabel&, const ProductLabel&) = default;
};

/// |sigma, sigma_z>_branch; sigma(sigma+2) is the eigenvalue of the total spin squared.
struct CoupledLabel {
    int sigma = 3;
    int sigma_z = -3;
    int branch = 1;
    friend constexpr bool operator==(const CoupledLabel&, const CoupledLabel&) = default;
};

inline constexpr std::array<ProductLabel, 8> kProductOrder{{
    {0, 0, 0}, {1, 0, 0}, {0, 1, 0}, {1, 1, 0},
    {0, 0, 1}, {1, 0, 1}, {0, 1, 1}, {1, 1, 1},
}};

inline constexpr std::array<CoupledLabel, 8> kCoupledOrder{{
    {3, -3, 1}, {3, -1, 1}, {3, 1, 1}, {3, 3, 1},
    {1, -1, 1}, {1, 1, 1}, {1, -1, 2}, {1, 1, 2},
}};

/// Real orthogonal 8x8 change of basis. Rows follow kCoupledOrder, columns
/// follow kProductOrder, so T * v maps product amplitudes to coupled ones.
[[nodiscard]] const Eigen::Matrix<double, 8, 8>& coupled_transform();

/// T * v. Throws ValidationError unless |v| = 1 within kNormTolerance.
[[nodiscard]] IonVector product_to_coupled(const IonVector& v);

/// Symmetric Dicke states in product order: 0 -> |000>, 1 -> |W1>, 2 -> |W2>, 3 -> |111>.
[[nodiscard]] IonVector dicke_state(int excitations);

// ---------------------------------------------------------------------------
// Four-party logical layout: ions A, B, C (dimension 2) and D (dimension 4),
// where D level d stands for the photon-phonon state |m+1-d, n+1-d>.

inline constexpr std::size_t kCompositeDim = 32;
inline constexpr std::array<int, 4> kCompositeDims{2, 2, 2, 4};

struct CompositeIndex {
    int i1 = 0;
    int i2 = 0;
    int i3 = 0;
    int d = 0;
    friend constexpr bool operator==(const CompositeIndex&, const CompositeIndex&) = default;
};

/// 16*i1 + 8*i2 + 4*i3 + d. Throws ValidationError on out-of-range components.
[[nodiscard]] int composite_index(int i1, int i2, int i3, int d);

/// Inverse of composite_index.
[[nodiscard]] CompositeIndex split_composite_index(int flat);

} // namespace ioncav
