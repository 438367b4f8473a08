#pragma once

#include <Eigen/Dense>

#include <complex>
#include <stdexcept>
#include <string>

namespace ioncav {

using Complex = std::complex<double>;

/// Ions A, B, C in product order, one amplitude per computational basis state.
using IonVector = Eigen::Matrix<Complex, 8, 1>;
using IonMatrix = Eigen::Matrix<Complex, 8, 8>;

/// Amplitudes on the 2x2x2x4 logical space of ions A, B, C and the
/// photon-phonon system D.
using CompositeVector = Eigen::Matrix<Complex, 32, 1>;

/// Raised when an input violates a documented precondition.
class ValidationError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Norm tolerance used for every "must be normalized" precondition.
inline constexpr double kNormTolerance = 1e-12;

} // namespace ioncav
