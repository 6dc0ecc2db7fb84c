#include "support.hpp"

using namespace smt;
using namespace smt::test;

TEST(Dft, SmallKnownTransform) {
    const Vector x = dft(Vector{1, 2, 3, 4});
    const Vector expect{10, {-2, 2}, -2, {-2, -2}};
    EXPECT_LT(rel_err(x, expect), 1e-15);
}

TEST(Dft, UnitImpulseGivesOnes) {
    const Vector x = dft(unit_vector(6, 0));
    EXPECT_LT(rel_err(x, ones(6)), 1e-15);
}

TEST(Dft, MatchesNaiveTransformForManySizes) {
    Random rng(11);
    for (std::size_t n : {1, 2, 3, 5, 7, 8, 12, 16, 31, 64, 97, 100, 128, 243}) {
        const Vector v = rng.vector(n);
        EXPECT_LT(rel_err(dft(v), naive_dft(v)), 1e-12) << "n=" << n;
        EXPECT_LT(rel_err(idft(v), [&] {
                      Vector r = naive_dft(v, +1);
                      for (cplx& z : r) z /= static_cast<double>(n);
                      return r;
                  }()),
                  1e-12)
            << "n=" << n;
    }
}

TEST(Dft, RoundTrip) {
    Random rng(12);
    for (std::size_t n : {1, 9, 32, 1000, 1024}) {
        const Vector v = rng.vector(n);
        EXPECT_LT(rel_err(idft(dft(v)), v), 1e-13) << "n=" << n;
    }
}

TEST(Dft, ParsevalAndLinearity) {
    Random rng(13);
    const std::size_t n = 45;
    const Vector a = rng.vector(n), b = rng.vector(n);
    const cplx s{0.3, -1.2};
    EXPECT_LT(rel_err(dft(a + s * b), dft(a) + s * dft(b)), 1e-13);
    const double lhs = norm2(dft(a));
    EXPECT_NEAR(lhs * lhs, static_cast<double>(n) * norm2(a) * norm2(a), 1e-10 * lhs * lhs);
}

TEST(Dft, EmptyInputRejected) {
    EXPECT_THROW(dft(Vector{}), InvalidArgument);
    EXPECT_THROW(idft(Vector{}), InvalidArgument);
}

TEST(Dft, FourierMatrixIsUnitaryAndDiagonalizesCirculants) {
    const std::size_t n = 6;
    const EMat F = to_eigen(fourier_matrix(n));
    EXPECT_LT((F * F.adjoint() - EMat::Identity(6, 6)).norm(), 1e-13);

    Random rng(14);
    const Circulant C(rng.vector(n));
    const EMat D = F.adjoint() * to_eigen(full(C)) * F;
    // off-diagonal part vanishes; diagonal holds the eigenvalue vector
    EMat off = D;
    off.diagonal().setZero();
    EXPECT_LT(off.norm(), 1e-12);
    for (std::size_t k = 0; k < n; ++k) EXPECT_LT(std::abs(D(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(k)) - C.ev()[k]), 1e-12);
}

TEST(Dft, NextPow2) {
    EXPECT_EQ(next_pow2(1), 1u);
    EXPECT_EQ(next_pow2(7), 8u);
    EXPECT_EQ(next_pow2(8), 8u);
    EXPECT_EQ(next_pow2(9), 16u);
    EXPECT_THROW(next_pow2(0), InvalidArgument);
}
