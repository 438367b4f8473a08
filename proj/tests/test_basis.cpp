#include "ioncav/basis.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <set>

using namespace ioncav;

TEST(Basis, ProductIndexRoundTrip) {
    for (int k = 0; k < 8; ++k) {
        const auto label = ProductLabel::from_index(k);
        EXPECT_EQ(label.index(), k);
        EXPECT_EQ(kProductOrder[static_cast<std::size_t>(k)], label);
    }
    EXPECT_EQ((ProductLabel{1, 1, 0}.excitations()), 2);
}

TEST(Basis, TransformIsOrthogonal) {
    const auto& t = coupled_transform();
    EXPECT_LT((t * t.transpose() - Eigen::Matrix<double, 8, 8>::Identity()).cwiseAbs().maxCoeff(), 1e-14);
}

TEST(Basis, SigmaThreeRowsAreDickeStates) {
    const auto& t = coupled_transform();
    for (int k = 0; k < 4; ++k) {
        const IonVector row = t.row(k).transpose().cast<Complex>();
        EXPECT_LT((row - dicke_state(k)).norm(), 1e-14) << "k = " << k;
    }
}

TEST(Basis, CoupledRowsHaveDefiniteExcitationNumber) {
    // sigma_z = 2 * excitations - 3 for every coupled state.
    const auto& t = coupled_transform();
    for (int r = 0; r < 8; ++r) {
        const int sz = kCoupledOrder[static_cast<std::size_t>(r)].sigma_z;
        for (int c = 0; c < 8; ++c) {
            if (std::abs(t(r, c)) > 1e-15) {
                EXPECT_EQ(2 * ProductLabel::from_index(c).excitations() - 3, sz);
            }
        }
    }
}

TEST(Basis, CoupledStatesAreTotalSpinEigenstates) {
    // S^2 = sum_{ij} s_i . s_j with s = sigma / 2; eigenvalue sigma(sigma + 2) / 4.
    Eigen::Matrix2cd sx, sy, sz;
    sx << 0, 1, 1, 0;
    sy << 0, Complex(0, -1), Complex(0, 1), 0;
    sz << 1, 0, 0, -1;
    auto on = [](const Eigen::Matrix2cd& s, int ion) {
        // Product order: ion 0 is the fastest index.
        Eigen::MatrixXcd out = Eigen::MatrixXcd::Identity(1, 1);
        for (int j = 2; j >= 0; --j) {
            const Eigen::Matrix2cd f = j == ion ? s : Eigen::Matrix2cd::Identity();
            Eigen::MatrixXcd next(out.rows() * 2, out.cols() * 2);
            for (int a = 0; a < out.rows(); ++a) {
                for (int b = 0; b < out.cols(); ++b) {
                    next.block(2 * a, 2 * b, 2, 2) = out(a, b) * f;
                }
            }
            out = next;
        }
        return out;
    };
    Eigen::MatrixXcd total = Eigen::MatrixXcd::Zero(8, 8);
    for (const auto* s : {&sx, &sy, &sz}) {
        Eigen::MatrixXcd sum = Eigen::MatrixXcd::Zero(8, 8);
        for (int ion = 0; ion < 3; ++ion) {
            sum += on(*s, ion) / 2.0;
        }
        total += sum * sum;
    }
    const auto& t = coupled_transform();
    for (int r = 0; r < 8; ++r) {
        const int sigma = kCoupledOrder[static_cast<std::size_t>(r)].sigma;
        const Eigen::VectorXcd v = t.row(r).transpose().cast<Complex>();
        EXPECT_LT((total * v - sigma * (sigma + 2) / 4.0 * v).norm(), 1e-12) << "row " << r;
    }
}

TEST(Basis, ProductToCoupledPreservesNorm) {
    IonVector v;
    for (int i = 0; i < 8; ++i) {
        v[i] = Complex(std::cos(i + 1.0), std::sin(2.0 * i));
    }
    v.normalize();
    EXPECT_NEAR(product_to_coupled(v).norm(), 1.0, 1e-12);
}

TEST(Basis, ProductToCoupledRejectsUnnormalized) {
    IonVector v = IonVector::Zero();
    v[0] = 2.0;
    EXPECT_THROW((void)product_to_coupled(v), ValidationError);
}

TEST(Basis, DickeStates) {
    EXPECT_EQ(dicke_state(0)[0], Complex(1.0));
    EXPECT_EQ(dicke_state(3)[7], Complex(1.0));
    const IonVector w = dicke_state(1);
    for (int k : {1, 2, 4}) {
        EXPECT_NEAR(w[k].real(), 1.0 / std::sqrt(3.0), 1e-15);
    }
    EXPECT_THROW((void)dicke_state(4), ValidationError);
    EXPECT_THROW((void)dicke_state(-1), ValidationError);
}

TEST(Basis, CompositeIndexBijective) {
    std::set<int> seen;
    for (int a = 0; a < 2; ++a)
        for (int b = 0; b < 2; ++b)
            for (int c = 0; c < 2; ++c)
                for (int d = 0; d < 4; ++d) {
                    const int flat = composite_index(a, b, c, d);
                    EXPECT_EQ(split_composite_index(flat), (CompositeIndex{a, b, c, d}));
                    seen.insert(flat);
                }
    EXPECT_EQ(seen.size(), kCompositeDim);
    EXPECT_EQ(composite_index(1, 1, 1, 3), 31);
}

TEST(Basis, CompositeIndexRejectsOutOfRange) {
    EXPECT_THROW((void)composite_index(2, 0, 0, 0), ValidationError);
    EXPECT_THROW((void)composite_index(0, 0, 0, 4), ValidationError);
    EXPECT_THROW((void)split_composite_index(32), ValidationError);
}
