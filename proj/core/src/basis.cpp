#include "ioncav/basis.hpp"

#include <cmath>
#include <string>

namespace ioncav {

const Eigen::Matrix<double, 8, 8>& coupled_transform() {
    static const Eigen::Matrix<double, 8, 8> t = [] {
        const double r3 = 1.0 / std::sqrt(3.0);
        const double r6 = 1.0 / std::sqrt(6.0);
        const double r2 = 1.0 / std::sqrt(2.0);
        const double r23 = std::sqrt(2.0 / 3.0);
        Eigen::Matrix<double, 8, 8> m;
        // columns: |000> |100> |010> |110> |001> |101> |011> |111>
        m << 1, 0, 0, 0, 0, 0, 0, 0,
             0, r3, r3, 0, r3, 0, 0, 0,
             0, 0, 0, r3, 0, r3, r3, 0,
             0, 0, 0, 0, 0, 0, 0, 1,
             0, r6, r6, 0, -r23, 0, 0, 0,
             0, 0, 0, r23, 0, -r6, -r6, 0,
             0, r2, -r2, 0, 0, 0, 0, 0,
             0, 0, 0, 0, 0, r2, -r2, 0;
        return m;
    }();
    return t;
}

IonVector product_to_coupled(const IonVector& v) {
    const double norm = v.norm();
    if (std::abs(norm - 1.0) > kNormTolerance) {
        throw ValidationError("product_to_coupled: input norm " + std::to_string(norm) +
                              " differs from 1");
    }
    return coupled_transform().cast<Complex>() * v;
}

IonVector dicke_state(int excitations) {
    if (excitations < 0 || excitations > 3) {
        throw ValidationError("dicke_state: excitation count must be in 0..3");
    }
    IonVector v = IonVector::Zero();
    int count = 0;
    for (const auto& label : kProductOrder) {
        if (label.excitations() == excitations) {
            v[label.index()] = 1.0;
            ++count;
        }
    }
    return v / std::sqrt(static_cast<double>(count));
}

int composite_index(int i1, int i2, int i3, int d) {
    auto bit = [](int x) { return x == 0 || x == 1; };
    if (!bit(i1) || !bit(i2) || !bit(i3) || d < 0 || d > 3) {
        throw ValidationError("composite_index: components out of range (" + std::to_string(i1) +
                              "," + std::to_string(i2) + "," + std::to_string(i3) + "," +
                              std::to_string(d) + ")");
    }
    return 16 * i1 + 8 * i2 + 4 * i3 + d;
}

CompositeIndex split_composite_index(int flat) {
    if (flat < 0 || flat >= static_cast<int>(kCompositeDim)) {
        throw ValidationError("split_composite_index: index out of range");
    }
    return {(flat >> 4) & 1, (flat >> 3) & 1, (flat >> 2) & 1, flat & 3};
}

} // namespace ioncav
