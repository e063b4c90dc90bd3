#include <gtest/gtest.h>

#include <cmath>

#include "framekit/error.hpp"
#include "framekit/numkernel.hpp"
#include "test_support.hpp"

using namespace framekit;
using namespace framekit::testing;

namespace {

const ComplexMatrix kOnes = ComplexMatrix::from_rows({{1, 1}, {1, 1}});

ComplexMatrix reassemble(const SvdResult& d) {
    std::vector<double> s = d.s;
    return d.u * ComplexMatrix::diagonal(s) * d.v.adjoint();
}

double orthonormality_defect(const ComplexMatrix& q) {
    return max_abs_diff(q.adjoint() * q, ComplexMatrix::identity(q.cols()));
}

} // namespace

TEST(ComplexMatrix, RejectsNonFiniteAndBadShape) {
    EXPECT_THROW(ComplexMatrix(2, 2, {1, 2, 3}), ShapeError);
    EXPECT_THROW(ComplexMatrix(1, 1, {Complex(NAN, 0)}), DomainError);
    EXPECT_THROW(ComplexMatrix(1, 1, {Complex(0, INFINITY)}), DomainError);
}

TEST(ComplexMatrix, ProductAndAdjoint) {
    const auto a = ComplexMatrix::from_rows({{1, Complex(0, 1)}, {2, 3}});
    const auto ah = a.adjoint();
    EXPECT_EQ(ah(0, 1), Complex(2, 0));
    EXPECT_EQ(ah(1, 0), Complex(0, -1));
    const auto p = a * ComplexMatrix::identity(2);
    EXPECT_EQ(p, a);
    EXPECT_THROW(a * ComplexMatrix(3, 1), ShapeError);
}

TEST(ComplexMatrix, InnerProductIsLinearInFirstSlot) {
    const CVector x{Complex(0, 1), 0};
    const CVector y{1, 0};
    EXPECT_EQ(inner(x, y), Complex(0, 1));
    EXPECT_EQ(inner(y, x), Complex(0, -1));
}

TEST(Tolerance, Validate) {
    EXPECT_NO_THROW(Tolerance{}.validate());
    EXPECT_THROW((Tolerance{0.0, 1e-8}.validate()), DomainError);
    EXPECT_THROW((Tolerance{1e-10, 1.5}.validate()), DomainError);
}

TEST(Svd, DiagonalCase) {
    const auto d = svd(ComplexMatrix::from_rows({{3, 0}, {0, 1}}));
    ASSERT_EQ(d.s.size(), 2u);
    EXPECT_NEAR(d.s[0], 3.0, 1e-15);
    EXPECT_NEAR(d.s[1], 1.0, 1e-15);
    EXPECT_LT(max_abs_diff(projector(d.u.columns(0, 1)), projector(ComplexMatrix::from_rows({{1}, {0}}))), 1e-15);
}

TEST(Svd, AllOnesHasSingularValuesTwoAndZero) {
    // M^H M = [[2,2],[2,2]] has eigenvalues 4 and 0.
    const auto d = svd(kOnes);
    EXPECT_NEAR(d.s[0], 2.0, 1e-14);
    EXPECT_NEAR(d.s[1], 0.0, 1e-14);
    EXPECT_LT(orthonormality_defect(d.u), 1e-14);
    EXPECT_LT(orthonormality_defect(d.v), 1e-14);
    EXPECT_LT(max_abs_diff(reassemble(d), kOnes), 1e-14);
}

TEST(Svd, ZeroMatrixStillHasOrthonormalFactors) {
    const auto d = svd(ComplexMatrix(3, 2));
    EXPECT_EQ(d.s, (std::vector<double>{0.0, 0.0}));
    EXPECT_LT(orthonormality_defect(d.u), 1e-15);
    EXPECT_LT(orthonormality_defect(d.v), 1e-15);
}

TEST(Svd, RandomFiveByThreeReconstructs) {
    Rng rng(7);
    const auto m = random_matrix(5, 3, rng);
    const auto d = svd(m);
    EXPECT_LT(max_abs_diff(reassemble(d), m), 1e-10);
    EXPECT_LT(max_abs_diff(reassemble(d), m), 1e-12 * d.s[0]);
    const auto oracle = oracle_singular_values(m);
    for (std::size_t k = 0; k < 3; ++k) EXPECT_NEAR(d.s[k], oracle(k), 1e-12 * d.s[0]);
}

TEST(Svd, PropertyReconstructionAndOracleAgreement) {
    Rng rng(11);
    for (int trial = 0; trial < 200; ++trial) {
        const std::size_t rows = uniform_index(rng, 1, 32);
        const std::size_t cols = uniform_index(rng, 1, 32);
        const std::size_t k = uniform_index(rng, 0, std::min(rows, cols));
        const auto m = trial % 2 == 0 ? random_matrix(rows, cols, rng) : random_low_rank(rows, cols, k, rng);
        const auto d = svd(m);
        ASSERT_TRUE(std::is_sorted(d.s.rbegin(), d.s.rend()));
        const double smax = d.s.empty() ? 0.0 : d.s[0];
        const double bound = 1e-10 * smax * std::sqrt(static_cast<double>(rows * cols));
        EXPECT_LE(max_abs_diff(reassemble(d), m), std::max(bound, 1e-300)) << rows << "x" << cols;
        EXPECT_LT(orthonormality_defect(d.u), 1e-12);
        EXPECT_LT(orthonormality_defect(d.v), 1e-12);
        const auto oracle = oracle_singular_values(m);
        for (std::size_t j = 0; j < d.s.size(); ++j) EXPECT_NEAR(d.s[j], oracle(j), 1e-11 * std::max(1.0, smax));
    }
}

TEST(Svd, IsDeterministic) {
    Rng rng(3);
    const auto m = random_matrix(9, 6, rng);
    const auto a = svd(m);
    const auto b = svd(m);
    EXPECT_EQ(a.u, b.u);
    EXPECT_EQ(a.s, b.s);
    EXPECT_EQ(a.v, b.v);
}

TEST(Pinv, Examples) {
    EXPECT_LT(max_abs_diff(pinv(ComplexMatrix::identity(3)), ComplexMatrix::identity(3)), 1e-15);
    const auto p = pinv(ComplexMatrix::from_rows({{2, 0}, {0, 0}}));
    EXPECT_LT(max_abs_diff(p, ComplexMatrix::from_rows({{0.5, 0}, {0, 0}})), 1e-15);
    // (A^H A)^{-1} A^H for A = [1; 1].
    const auto col = pinv(ComplexMatrix::from_rows({{1}, {1}}));
    EXPECT_LT(max_abs_diff(col, ComplexMatrix::from_rows({{0.5, 0.5}})), 1e-15);
}

TEST(Pinv, PenroseIdentitiesAndInvolution) {
    Rng rng(19);
    const Tolerance tol;
    for (int trial = 0; trial < 100; ++trial) {
        const std::size_t rows = uniform_index(rng, 1, 10);
        const std::size_t cols = uniform_index(rng, 1, 10);
        const std::size_t k = uniform_index(rng, 0, std::min(rows, cols));
        const auto m = random_low_rank(rows, cols, k, rng);
        const auto p = pinv(m, tol);
        const double scale = 1.0 + m.frobenius_norm() * p.frobenius_norm();
        EXPECT_LT(max_abs_diff(m * p * m, m), tol.eq_tol * scale);
        EXPECT_LT(max_abs_diff(p * m * p, p), tol.eq_tol * scale);
        EXPECT_LT(max_abs_diff((m * p).adjoint(), m * p), tol.eq_tol);
        EXPECT_LT(max_abs_diff((p * m).adjoint(), p * m), tol.eq_tol);
        EXPECT_LT(max_abs_diff(pinv(p, tol), m), tol.eq_tol * (1.0 + m.max_abs()));
    }
}

TEST(Rank, Examples) {
    EXPECT_EQ(rank(ComplexMatrix(3, 3)), 0u);
    EXPECT_EQ(rank(kOnes), 1u);
    EXPECT_EQ(rank(ComplexMatrix::identity(4)), 4u);
}

TEST(Rank, InvariantUnderAdjointAndGram) {
    Rng rng(23);
    for (int trial = 0; trial < 100; ++trial) {
        const std::size_t rows = uniform_index(rng, 1, 12);
        const std::size_t cols = uniform_index(rng, 1, 12);
        const std::size_t k = uniform_index(rng, 0, std::min(rows, cols));
        const auto m = random_low_rank(rows, cols, k, rng);
        EXPECT_EQ(rank(m), k);
        EXPECT_EQ(rank(m.adjoint()), k);
        EXPECT_EQ(rank(m.adjoint() * m), k);
    }
}

TEST(Orth, Examples) {
    const auto e1 = orth(ComplexMatrix::from_rows({{2}, {0}}));
    ASSERT_EQ(e1.cols(), 1u);
    EXPECT_NEAR(std::abs(e1(0, 0)), 1.0, 1e-15);
    EXPECT_NEAR(std::abs(e1(1, 0)), 0.0, 1e-15);

    const auto q = orth(kOnes);
    ASSERT_EQ(q.cols(), 1u);
    EXPECT_LT(max_abs_diff(projector(q), 0.5 * kOnes), 1e-15);

    const auto full = orth(ComplexMatrix::identity(2));
    EXPECT_EQ(full.cols(), 2u);
    EXPECT_LT(orthonormality_defect(full), 1e-15);
}

TEST(Orth, MatchesOracleRange) {
    Rng rng(29);
    for (int trial = 0; trial < 100; ++trial) {
        const std::size_t rows = uniform_index(rng, 1, 10);
        const std::size_t cols = uniform_index(rng, 1, 8);
        const std::size_t k = uniform_index(rng, 0, std::min(rows, cols));
        const auto m = random_low_rank(rows, cols, k, rng);
        const auto q = orth(m);
        EXPECT_EQ(q.cols(), k);
        EXPECT_LT(orthonormality_defect(q), 1e-12);
        EXPECT_LT(max_abs_diff(projector(q), oracle_range_projector(m)), 1e-9);
    }
}

TEST(Eigh, MatchesOracleOnRandomHermitian) {
    Rng rng(31);
    for (int trial = 0; trial < 50; ++trial) {
        const std::size_t n = uniform_index(rng, 1, 16);
        const auto g = random_matrix(n, n, rng);
        const auto h = g + g.adjoint();
        const auto e = eigh(h);
        Eigen::SelfAdjointEigenSolver<EMat> oracle(to_eigen(h));
        for (std::size_t k = 0; k < n; ++k) {
            EXPECT_NEAR(e.values[k], oracle.eigenvalues()(static_cast<Eigen::Index>(n - 1 - k)), 1e-11 * h.max_abs());
        }
        EXPECT_LT(orthonormality_defect(e.vectors), 1e-12);
        std::vector<double> vals = e.values;
        EXPECT_LT(max_abs_diff(e.vectors * ComplexMatrix::diagonal(vals) * e.vectors.adjoint(), h), 1e-11 * h.max_abs());
    }
}

TEST(Eigh, RejectsNonHermitian) {
    EXPECT_THROW(eigh(ComplexMatrix::from_rows({{1, 2}, {0, 1}})), DomainError);
    EXPECT_THROW(eigh(ComplexMatrix(2, 3)), DomainError);
}

TEST(PsdPower, Examples) {
    const auto d40 = ComplexMatrix::from_rows({{4, 0}, {0, 0}});
    EXPECT_LT(max_abs_diff(psd_power(d40, 0.5), ComplexMatrix::from_rows({{2, 0}, {0, 0}})), 1e-15);
    EXPECT_LT(max_abs_diff(psd_power(d40, -0.5), ComplexMatrix::from_rows({{0.5, 0}, {0, 0}})), 1e-15);
    // Eigenpair (2, (1,1)/sqrt2) of the all-ones matrix.
    const auto r = psd_power(kOnes, -0.5);
    EXPECT_LT(max_abs_diff(r, (1.0 / (2.0 * std::sqrt(2.0))) * kOnes), 1e-15);
}

TEST(PsdPower, SquareRootSquaresBack) {
    Rng rng(37);
    for (int trial = 0; trial < 100; ++trial) {
        const std::size_t n = uniform_index(rng, 1, 16);
        const std::size_t k = uniform_index(rng, 0, n);
        const auto b = random_matrix(n, k, rng);
        const auto m = b * b.adjoint();
        const auto root = psd_power(m, 0.5);
        EXPECT_TRUE(is_hermitian(root, 1e-14));
        EXPECT_LT(max_abs_diff(root * root, m), 1e-8 * std::max(1.0, m.max_abs()));
    }
}

TEST(PsdPower, RejectsNegativeAndNonHermitian) {
    EXPECT_THROW(psd_power(ComplexMatrix::from_rows({{1, 0}, {0, -1}}), 0.5), DomainError);
    EXPECT_THROW(psd_power(ComplexMatrix::from_rows({{1, 1}, {0, 1}}), 0.5), DomainError);
    // A tiny negative eigenvalue within eq_tol is treated as zero.
    EXPECT_NO_THROW(psd_power(ComplexMatrix::from_rows({{1, 0}, {0, -1e-12}}), 0.5));
}

TEST(Solve, SolvesAndDetectsSingular) {
    Rng rng(41);
    const auto a = random_matrix(5, 5, rng);
    const auto x = random_matrix(5, 2, rng);
    EXPECT_LT(max_abs_diff(solve(a, a * x), x), 1e-10);
    EXPECT_THROW(solve(kOnes, ComplexMatrix::identity(2)), DomainError);
}

// Gramians of low-rank systems carry columns at rounding level; the sweeps
// must still converge and return orthonormal factors.
TEST(Svd, RankDeficientGramiansConverge) {
    Rng rng(19);
    for (int trial = 0; trial < 300; ++trial) {
        const std::size_t d = uniform_index(rng, 1, 6);
        const std::size_t r = uniform_index(rng, 1, 8);
        const auto f = random_low_rank(d, r, uniform_index(rng, 1, std::min(d, r)), rng);
        const auto g = f.adjoint() * f;
        SvdResult dec;
        ASSERT_NO_THROW(dec = svd(g));
        EXPECT_LT(orthonormality_defect(dec.u), 1e-12);
        EXPECT_LT(max_abs_diff(reassemble(dec), g), 1e-12 * (1.0 + dec.s[0]));
    }
}
