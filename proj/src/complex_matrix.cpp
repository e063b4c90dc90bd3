#include "framekit/numkernel.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "framekit/error.hpp"

namespace framekit {

void Tolerance::validate() const {
    auto ok = [](double v) { return v > 0.0 && v < 1.0; };
    if (!ok(rel_rank_tol) || !ok(eq_tol)) {
        throw DomainError("tolerances must lie in (0, 1): rel_rank_tol=" + std::to_string(rel_rank_tol) +
                          " eq_tol=" + std::to_string(eq_tol));
    }
}

ComplexMatrix::ComplexMatrix(std::size_t rows, std::size_t cols)
    : rows_(rows), cols_(cols), data_(rows * cols) {}

ComplexMatrix::ComplexMatrix(std::size_t rows, std::size_t cols, std::vector<Complex> data)
    : rows_(rows), cols_(cols), data_(std::move(data)) {
    if (data_.size() != rows_ * cols_) {
        throw ShapeError("matrix data has " + std::to_string(data_.size()) + " entries, expected " +
                         std::to_string(rows_ * cols_));
    }
    if (!all_finite()) {
        throw DomainError("matrix entries must be finite");
    }
}

ComplexMatrix ComplexMatrix::identity(std::size_t n) {
    ComplexMatrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
    return m;
}

ComplexMatrix ComplexMatrix::from_rows(std::initializer_list<std::initializer_list<Complex>> rows) {
    const std::size_t r = rows.size();
    const std::size_t c = r == 0 ? 0 : rows.begin()->size();
    std::vector<Complex> data;
    data.reserve(r * c);
    for (const auto& row : rows) {
        if (row.size() != c) throw ShapeError("ragged row list");
        data.insert(data.end(), row.begin(), row.end());
    }
    return ComplexMatrix(r, c, std::move(data));
}

ComplexMatrix ComplexMatrix::from_columns(std::span<const CVector> cols, std::size_t rows) {
    ComplexMatrix m(rows, cols.size());
    for (std::size_t j = 0; j < cols.size(); ++j) {
        if (cols[j].size() != rows) {
            throw ShapeError("column " + std::to_string(j) + " has length " + std::to_string(cols[j].size()) +
                             ", expected " + std::to_string(rows));
        }
        m.set_column(j, cols[j]);
    }
    if (!m.all_finite()) throw DomainError("matrix entries must be finite");
    return m;
}

ComplexMatrix ComplexMatrix::diagonal(std::span<const double> values) {
    ComplexMatrix m(values.size(), values.size());
    for (std::size_t i = 0; i < values.size(); ++i) m(i, i) = values[i];
    return m;
}

CVector ComplexMatrix::column(std::size_t j) const {
    CVector out(rows_);
    for (std::size_t i = 0; i < rows_; ++i) out[i] = (*this)(i, j);
    return out;
}

void ComplexMatrix::set_column(std::size_t j, std::span<const Complex> values) {
    if (values.size() != rows_ || j >= cols_) throw ShapeError("set_column: shape mismatch");
    for (std::size_t i = 0; i < rows_; ++i) (*this)(i, j) = values[i];
}

ComplexMatrix ComplexMatrix::columns(std::size_t first, std::size_t count) const {
    if (first + count > cols_) throw ShapeError("columns: range out of bounds");
    ComplexMatrix out(rows_, count);
    for (std::size_t i = 0; i < rows_; ++i)
        for (std::size_t j = 0; j < count; ++j) out(i, j) = (*this)(i, first + j);
    return out;
}

ComplexMatrix ComplexMatrix::adjoint() const {
    ComplexMatrix out(cols_, rows_);
    for (std::size_t i = 0; i < rows_; ++i)
        for (std::size_t j = 0; j < cols_; ++j) out(j, i) = std::conj((*this)(i, j));
    return out;
}

ComplexMatrix ComplexMatrix::conjugate() const {
    ComplexMatrix out = *this;
    for (auto& z : out.data_) z = std::conj(z);
    return out;
}

ComplexMatrix ComplexMatrix::transpose() const {
    ComplexMatrix out(cols_, rows_);
    for (std::size_t i = 0; i < rows_; ++i)
        for (std::size_t j = 0; j < cols_; ++j) out(j, i) = (*this)(i, j);
    return out;
}

double ComplexMatrix::frobenius_norm() const {
    double acc = 0.0;
    for (const auto& z : data_) acc += std::norm(z);
    return std::sqrt(acc);
}

double ComplexMatrix::max_abs() const {
    double m = 0.0;
    for (const auto& z : data_) m = std::max(m, std::abs(z));
    return m;
}

bool ComplexMatrix::all_finite() const {
    return std::all_of(data_.begin(), data_.end(),
                       [](const Complex& z) { return std::isfinite(z.real()) && std::isfinite(z.imag()); });
}

ComplexMatrix& ComplexMatrix::operator+=(const ComplexMatrix& other) {
    if (rows_ != other.rows_ || cols_ != other.cols_) throw ShapeError("matrix sum: shape mismatch");
    for (std::size_t k = 0; k < data_.size(); ++k) data_[k] += other.data_[k];
    return *this;
}

ComplexMatrix& ComplexMatrix::operator-=(const ComplexMatrix& other) {
    if (rows_ != other.rows_ || cols_ != other.cols_) throw ShapeError("matrix difference: shape mismatch");
    for (std::size_t k = 0; k < data_.size(); ++k) data_[k] -= other.data_[k];
    return *this;
}

ComplexMatrix& ComplexMatrix::operator*=(Complex scalar) {
    for (auto& z : data_) z *= scalar;
    return *this;
}

ComplexMatrix operator+(ComplexMatrix lhs, const ComplexMatrix& rhs) { return lhs += rhs; }
ComplexMatrix operator-(ComplexMatrix lhs, const ComplexMatrix& rhs) { return lhs -= rhs; }
ComplexMatrix operator*(Complex scalar, ComplexMatrix m) { return m *= scalar; }

ComplexMatrix operator*(const ComplexMatrix& lhs, const ComplexMatrix& rhs) {
    if (lhs.cols() != rhs.rows()) {
        throw ShapeError("matrix product: " + std::to_string(lhs.rows()) + "x" + std::to_string(lhs.cols()) +
                         " times " + std::to_string(rhs.rows()) + "x" + std::to_string(rhs.cols()));
    }
    ComplexMatrix out(lhs.rows(), rhs.cols());
    for (std::size_t i = 0; i < lhs.rows(); ++i)
        for (std::size_t k = 0; k < lhs.cols(); ++k) {
            const Complex a = lhs(i, k);
            if (a == Complex{}) continue;
            for (std::size_t j = 0; j < rhs.cols(); ++j) out(i, j) += a * rhs(k, j);
        }
    return out;
}

CVector operator*(const ComplexMatrix& m, std::span<const Complex> x) {
    if (m.cols() != x.size()) throw ShapeError("matrix-vector product: shape mismatch");
    CVector out(m.rows());
    for (std::size_t i = 0; i < m.rows(); ++i) {
        Complex acc{};
        for (std::size_t j = 0; j < m.cols(); ++j) acc += m(i, j) * x[j];
        out[i] = acc;
    }
    return out;
}

ComplexMatrix hstack(const ComplexMatrix& lhs, const ComplexMatrix& rhs) {
    if (lhs.rows() != rhs.rows()) throw ShapeError("hstack: row counts differ");
    ComplexMatrix out(lhs.rows(), lhs.cols() + rhs.cols());
    for (std::size_t i = 0; i < lhs.rows(); ++i) {
        for (std::size_t j = 0; j < lhs.cols(); ++j) out(i, j) = lhs(i, j);
        for (std::size_t j = 0; j < rhs.cols(); ++j) out(i, lhs.cols() + j) = rhs(i, j);
    }
    return out;
}

Complex inner(std::span<const Complex> x, std::span<const Complex> y) {
    if (x.size() != y.size()) throw ShapeError("inner product: length mismatch");
    Complex acc{};
    for (std::size_t k = 0; k < x.size(); ++k) acc += x[k] * std::conj(y[k]);
    return acc;
}

double norm(std::span<const Complex> x) {
    double acc = 0.0;
    for (const auto& z : x) acc += std::norm(z);
    return std::sqrt(acc);
}

CVector axpy(Complex a, std::span<const Complex> x, std::span<const Complex> y) {
    if (x.size() != y.size()) throw ShapeError("axpy: length mismatch");
    CVector out(y.begin(), y.end());
    for (std::size_t k = 0; k < x.size(); ++k) out[k] += a * x[k];
    return out;
}

double distance(std::span<const Complex> x, std::span<const Complex> y) {
    if (x.size() != y.size()) throw ShapeError("distance: length mismatch");
    double acc = 0.0;
    for (std::size_t k = 0; k < x.size(); ++k) acc += std::norm(x[k] - y[k]);
    return std::sqrt(acc);
}

} // namespace framekit
