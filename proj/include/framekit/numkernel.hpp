#pragma once

// Dense complex linear algebra used throughout framekit: a row-major matrix
// value type plus deterministic SVD, Hermitian eigendecomposition, rank,
// pseudoinverse, orthonormal range basis and PSD fractional powers.
//
// Inner products are linear in the first slot: <x, y> = sum_k x_k conj(y_k).

#include <complex>
#include <cstddef>
#include <initializer_list>
#include <span>
#include <vector>

namespace framekit {

using Complex = std::complex<double>;
using CVector = std::vector<Complex>;

/// Numerical decision thresholds.
///
/// `rel_rank_tol` is a relative singular-value cutoff: a singular value
/// counts as nonzero when it exceeds rel_rank_tol * sigma_max.
/// `eq_tol` is the tolerance for matrix identities (Hermitian checks,
/// Penrose identities, alternate-dual residuals).
struct Tolerance {
    double rel_rank_tol = 1e-10;
    double eq_tol = 1e-8;

    /// Throws DomainError unless both values lie in (0, 1).
    void validate() const;
};

class ComplexMatrix {
public:
    ComplexMatrix() = default;
    ComplexMatrix(std::size_t rows, std::size_t cols);
    /// Takes row-major entries. Throws ShapeError on a length mismatch and
    /// DomainError on a non-finite entry.
    ComplexMatrix(std::size_t rows, std::size_t cols, std::vector<Complex> data);

    static ComplexMatrix identity(std::size_t n);
    static ComplexMatrix from_rows(std::initializer_list<std::initializer_list<Complex>> rows);
    /// Builds a rows x cols.size() matrix whose j-th column is cols[j].
    static ComplexMatrix from_columns(std::span<const CVector> cols, std::size_t rows);
    static ComplexMatrix diagonal(std::span<const double> values);

    std::size_t rows() const noexcept { return rows_; }
    std::size_t cols() const noexcept { return cols_; }
    bool empty() const noexcept { return data_.empty(); }

    Complex operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }
    Complex& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }

    std::span<const Complex> data() const noexcept { return data_; }

    CVector column(std::size_t j) const;
    void set_column(std::size_t j, std::span<const Complex> values);
    /// Columns [first, first + count).
    ComplexMatrix columns(std::size_t first, std::size_t count) const;

    ComplexMatrix adjoint() const;
    ComplexMatrix conjugate() const;
    ComplexMatrix transpose() const;

    double frobenius_norm() const;
    double max_abs() const;
    bool all_finite() const;

    ComplexMatrix& operator+=(const ComplexMatrix& other);
    ComplexMatrix& operator-=(const ComplexMatrix& other);
    ComplexMatrix& operator*=(Complex scalar);

    friend bool operator==(const ComplexMatrix&, const ComplexMatrix&) = default;

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<Complex> data_;
};

ComplexMatrix operator+(ComplexMatrix lhs, const ComplexMatrix& rhs);
ComplexMatrix operator-(ComplexMatrix lhs, const ComplexMatrix& rhs);
ComplexMatrix operator*(Complex scalar, ComplexMatrix m);
ComplexMatrix operator*(const ComplexMatrix& lhs, const ComplexMatrix& rhs);
CVector operator*(const ComplexMatrix& m, std::span<const Complex> x);

/// [lhs | rhs]; row counts must agree.
ComplexMatrix hstack(const ComplexMatrix& lhs, const ComplexMatrix& rhs);

Complex inner(std::span<const Complex> x, std::span<const Complex> y);
double norm(std::span<const Complex> x);
CVector axpy(Complex a, std::span<const Complex> x, std::span<const Complex> y);
double distance(std::span<const Complex> x, std::span<const Complex> y);

/// Thin SVD: M = U diag(s) V^H with k = min(rows, cols) columns in U and V,
/// s nonincreasing. One-sided Jacobi; deterministic for a fixed input.
struct SvdResult {
    ComplexMatrix u;
    std::vector<double> s;
    ComplexMatrix v;
};

/// Throws NumericalFailure if the Jacobi sweeps do not converge.
SvdResult svd(const ComplexMatrix& m);

/// Hermitian eigendecomposition M = Q diag(values) Q^H, values nonincreasing.
struct EigenResult {
    std::vector<double> values;
    ComplexMatrix vectors;
};

/// Throws DomainError if `m` is not square and Hermitian within tol.eq_tol,
/// NumericalFailure on non-convergence.
EigenResult eigh(const ComplexMatrix& m, const Tolerance& tol = {});

bool is_hermitian(const ComplexMatrix& m, double eq_tol);

/// Number of singular values above rel_rank_tol * sigma_max.
std::size_t rank(const ComplexMatrix& m, const Tolerance& tol = {});

/// Moore-Penrose pseudoinverse with sub-cutoff singular values zeroed.
ComplexMatrix pinv(const ComplexMatrix& m, const Tolerance& tol = {});

/// Orthonormal basis of the column space, rank(m) columns.
ComplexMatrix orth(const ComplexMatrix& m, const Tolerance& tol = {});

/// Largest singular value (0 for empty matrices).
double spectral_norm(const ComplexMatrix& m);

/// M^p for Hermitian PSD M, the power applied to eigenvalues above the rank
/// cutoff and zero elsewhere (so negative p acts on the support only).
/// Throws DomainError for non-Hermitian input or eigenvalues below -eq_tol
/// (relative to the spectral radius when it exceeds 1).
ComplexMatrix psd_power(const ComplexMatrix& m, double p, const Tolerance& tol = {});

/// Solves A X = B for square A by LU with partial pivoting.
/// Throws DomainError when A is singular to working precision.
ComplexMatrix solve(const ComplexMatrix& a, const ComplexMatrix& b);

} // namespace framekit
