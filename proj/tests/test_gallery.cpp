#include "support.hpp"

using namespace smt;
using namespace smt::test;

namespace {

Toeplitz toep(const std::string& name, std::size_t n, std::map<std::string, double> params = {}) {
    return std::get<Toeplitz>(smtgallery(name, n, std::move(params), Config{}));
}

bool symmetric(const DenseMatrix& A) {
    for (std::size_t i = 0; i < A.rows(); ++i)
        for (std::size_t j = 0; j < A.cols(); ++j)
            if (A(i, j) != A(j, i)) return false;
    return true;
}

double min_eigenvalue(const DenseMatrix& A) {
    Eigen::SelfAdjointEigenSolver<EMat> es(to_eigen(A));
    return es.eigenvalues().minCoeff();
}

} // namespace

TEST(Gallery, NamesAreStable) {
    const std::vector<std::string> expect{"algdec",   "crrand",  "crrandn", "expdec", "gaussian", "tchow",
                                          "tdramadah", "tgrcar", "tkms",    "tparter", "tphans",  "tprand",
                                          "tprandn",  "tprolate", "ttoeppd", "ttoeppen", "ttridiag", "ttriw"};
    EXPECT_EQ(gallery_names(), expect);
}

TEST(Gallery, Prolate) {
    const Toeplitz T = toep("tprolate", 3);
    EXPECT_LT(std::abs(T.diagonal(0) - 0.5), 1e-15);
    EXPECT_LT(std::abs(T.diagonal(1) - 1.0 / std::numbers::pi), 1e-15);
    EXPECT_LT(std::abs(T.diagonal(2)), 1e-15);
    EXPECT_TRUE(symmetric(full(T)));
}

TEST(Gallery, Kms) {
    const Toeplitz T = toep("tkms", 3, {{"rho", 0.5}});
    EXPECT_EQ(T.t(), (Vector{0.25, 0.5, 1, 0.5, 0.25}));
}

TEST(Gallery, SymmetricDecayFamilies) {
    const Toeplitz a = toep("algdec", 4), e = toep("expdec", 4, {{"p", 1.0}}), g = toep("gaussian", 7);
    EXPECT_LT(std::abs(a.diagonal(3) - 1.0 / 16.0), 1e-15);
    EXPECT_LT(std::abs(e.diagonal(-2) - std::exp(-2.0)), 1e-15);
    EXPECT_LT(std::abs(g.diagonal(6) - std::exp(-3.6)), 1e-15);
    EXPECT_EQ(g.t().size(), 13u);
    for (const Toeplitz* T : {&a, &e, &g}) {
        EXPECT_TRUE(symmetric(full(*T)));
        EXPECT_GT(min_eigenvalue(full(*T)), 0.0);
    }
}

TEST(Gallery, Tridiagonal) {
    const Toeplitz T = toep("ttridiag", 4);
    EXPECT_EQ(T.t(), (Vector{0, 0, -1, 2, -1, 0, 0}));
    const Toeplitz U = toep("ttridiag", 3, {{"c", 1}, {"d", 5}, {"e", 7}});
    EXPECT_EQ(U(1, 0), cplx(1));
    EXPECT_EQ(U(0, 1), cplx(7));
}

TEST(Gallery, Pentadiagonal) {
    const DenseMatrix A = full(toep("ttoeppen", 5));
    EXPECT_EQ(A(0, 0), cplx(0));
    EXPECT_EQ(A(1, 0), cplx(10));
    EXPECT_EQ(A(2, 0), cplx(1));
    EXPECT_EQ(A(0, 1), cplx(-10));
    EXPECT_EQ(A(0, 2), cplx(1));
    EXPECT_EQ(A(0, 3), cplx(0));
}

TEST(Gallery, Grcar) {
    const DenseMatrix A = full(toep("tgrcar", 6));
    for (std::size_t i = 0; i < 6; ++i)
        for (std::size_t j = 0; j < 6; ++j) {
            const long long d = static_cast<long long>(j) - static_cast<long long>(i);
            const double expect = d == -1 ? -1.0 : (d >= 0 && d <= 3) ? 1.0 : 0.0;
            EXPECT_EQ(A(i, j), cplx(expect)) << i << "," << j;
        }
}

TEST(Gallery, Parter) {
    const DenseMatrix A = full(toep("tparter", 4));
    for (std::size_t i = 0; i < 4; ++i)
        for (std::size_t j = 0; j < 4; ++j)
            EXPECT_EQ(A(i, j), cplx(1.0 / (static_cast<double>(i) - static_cast<double>(j) + 0.5)));
}

TEST(Gallery, Chow) {
    const DenseMatrix A = full(toep("tchow", 4, {{"alpha", 2.0}, {"delta", 1.0}}));
    EXPECT_EQ(A(0, 0), cplx(3)); // alpha + delta
    EXPECT_EQ(A(0, 1), cplx(1)); // superdiagonal: alpha^0
    EXPECT_EQ(A(1, 0), cplx(4));
    EXPECT_EQ(A(3, 0), cplx(16));
    EXPECT_EQ(A(0, 2), cplx(0));
}

TEST(Gallery, Triw) {
    const DenseMatrix A = full(toep("ttriw", 4));
    EXPECT_EQ(A(0, 0), cplx(1));
    EXPECT_EQ(A(0, 3), cplx(-1));
    EXPECT_EQ(A(3, 0), cplx(0));
    const DenseMatrix B = full(toep("ttriw", 4, {{"alpha", 2}, {"k", 1}}));
    EXPECT_EQ(B(0, 1), cplx(2));
    EXPECT_EQ(B(0, 2), cplx(0));
}

TEST(Gallery, DramadahIsZeroOne) {
    for (double k : {1.0, 2.0, 3.0}) {
        const Toeplitz T = toep("tdramadah", 8, {{"k", k}});
        for (const cplx& z : T.t()) EXPECT_TRUE(z == cplx(0) || z == cplx(1));
        EXPECT_GT(std::abs(to_eigen(full(T)).determinant()), 0.5);
    }
    EXPECT_NEAR(to_eigen(full(toep("tdramadah", 8, {{"k", 3}}))).determinant().real(), 21.0, 1e-9);
    EXPECT_THROW(toep("tdramadah", 4, {{"k", 4}}), InvalidArgument);
}

TEST(Gallery, ToeppdIsPositiveSemidefinite) {
    GallerySpec spec{"ttoeppd", 12, 0, {{"m", 5}}, 3, false};
    const Toeplitz T = std::get<Toeplitz>(smtgallery(spec));
    EXPECT_TRUE(symmetric(full(T)));
    EXPECT_GT(min_eigenvalue(full(T)), -1e-12);
}

TEST(Gallery, PhansIsSymmetricAndLowRank) {
    const Toeplitz T = toep("tphans", 16);
    EXPECT_TRUE(symmetric(full(T)));
    Eigen::JacobiSVD<EMat> svd(to_eigen(full(T)));
    const auto s = svd.singularValues();
    EXPECT_LT(s(s.size() - 1), 1e-10 * s(0));
}

TEST(Gallery, RandomFamiliesAreSeeded) {
    GallerySpec spec{"crrand", 6, 0, {}, 9, false};
    const Circulant a = std::get<Circulant>(smtgallery(spec));
    const Circulant b = std::get<Circulant>(smtgallery(spec));
    EXPECT_EQ(a.col(), b.col());
    for (const cplx& z : a.col()) {
        EXPECT_GE(z.real(), 0.0);
        EXPECT_LT(z.real(), 1.0);
        EXPECT_EQ(z.imag(), 0.0);
    }
    spec.seed = 10;
    EXPECT_NE(std::get<Circulant>(smtgallery(spec)).col(), a.col());

    GallerySpec rect{"tprandn", 3, 5, {}, 1, true};
    const Toeplitz T = std::get<Toeplitz>(smtgallery(rect));
    EXPECT_EQ(T.rows(), 3u);
    EXPECT_EQ(T.cols(), 5u);
    EXPECT_FALSE(T.is_real());
}

TEST(Gallery, InvalidRequests) {
    EXPECT_THROW(smtgallery("nope", 3), InvalidArgument);
    EXPECT_THROW(smtgallery("tkms", 3, {{"alpha", 1}}), InvalidArgument);
    EXPECT_THROW(smtgallery("tkms", 0), InvalidArgument);
    GallerySpec rect{"tkms", 3, 4, {}, 0, false};
    EXPECT_THROW(smtgallery(rect), InvalidArgument);
    EXPECT_THROW(smtgallery("tgrcar", 4, {{"k", 1.5}}), InvalidArgument);
    try {
        smtgallery("nope", 3);
    } catch (const InvalidArgument& e) {
        EXPECT_NE(std::string(e.what()).find("tprolate"), std::string::npos);
    }
}
