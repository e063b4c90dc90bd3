#include "framekit/subspace.hpp"

#include <algorithm>
#include <string>

#include "framekit/error.hpp"

namespace framekit {

namespace {

void require_same_ambient(const Subspace& v, const Subspace& w, const char* op) {
    if (v.ambient_dim() != w.ambient_dim()) {
        throw ShapeError(std::string(op) + ": ambient dimensions differ (" + std::to_string(v.ambient_dim()) +
                         " vs " + std::to_string(w.ambient_dim()) + ")");
    }
}

double clamp_unit(double x) { return std::clamp(x, 0.0, 1.0); }

} // namespace

Subspace Subspace::from_orthonormal(ComplexMatrix basis, const Tolerance& tol) {
    if (basis.cols() > basis.rows()) throw DomainError("subspace basis has more columns than rows");
    const ComplexMatrix gram = basis.adjoint() * basis;
    const double defect = (gram - ComplexMatrix::identity(basis.cols())).max_abs();
    if (defect > tol.eq_tol) {
        throw DomainError("subspace basis is not orthonormal (defect " + std::to_string(defect) + ")");
    }
    return Subspace(std::move(basis));
}

Subspace Subspace::span_of(const ComplexMatrix& vectors, const Tolerance& tol) {
    return Subspace(orth(vectors, tol));
}

Subspace Subspace::zero(std::size_t ambient_dim) { return Subspace(ComplexMatrix(ambient_dim, 0)); }

Subspace Subspace::full(std::size_t ambient_dim) { return Subspace(ComplexMatrix::identity(ambient_dim)); }

ComplexMatrix Subspace::projector() const { return basis_ * basis_.adjoint(); }

CVector project(const Subspace& w, std::span<const Complex> v) {
    if (v.size() != w.ambient_dim()) {
        throw ShapeError("project: vector length " + std::to_string(v.size()) + " vs ambient dimension " +
                         std::to_string(w.ambient_dim()));
    }
    const CVector coeffs = w.basis().adjoint() * v;
    return w.basis() * std::span<const Complex>(coeffs);
}

std::vector<double> principal_cosines(const Subspace& v, const Subspace& w) {
    require_same_ambient(v, w, "principal_cosines");
    if (v.dim() == 0 || w.dim() == 0) return {};
    std::vector<double> s = svd(w.basis().adjoint() * v.basis()).s;
    for (auto& x : s) x = clamp_unit(x);
    return s;
}

double inf_cos(const Subspace& v, const Subspace& w) {
    require_same_ambient(v, w, "inf_cos");
    if (v.dim() == 0) return 1.0;
    if (w.dim() < v.dim()) return 0.0;
    // dim W x dim V cross matrix has exactly dim V singular values here.
    return principal_cosines(v, w)[v.dim() - 1];
}

double sup_cos(const Subspace& v, const Subspace& w) {
    require_same_ambient(v, w, "sup_cos");
    if (v.dim() == 0 || w.dim() == 0) return 0.0;
    const double c = principal_cosines(v, w).front();
    if (c * c < 0.5) return c;
    // Near-parallel directions: cosines carry only absolute accuracy eps, so
    // recover the cosine from the smallest sine, the least singular value of
    // (I - P_W) V.basis.
    const ComplexMatrix residual = v.basis() - w.projector() * v.basis();
    const double s = svd(residual).s.back();
    return clamp_unit(std::sqrt(std::max(0.0, 1.0 - s * s)));
}

Subspace ortho_complement(const Subspace& v, const Tolerance& tol) {
    const std::size_t d = v.ambient_dim();
    const std::size_t k = d - v.dim();
    if (k == 0) return Subspace::zero(d);
    if (v.dim() == 0) return Subspace::full(d);
    // I - P_V has eigenvalue 1 with multiplicity d - p and 0 otherwise.
    const ComplexMatrix residual = ComplexMatrix::identity(d) - v.projector();
    const SvdResult dec = svd(residual);
    return Subspace::from_orthonormal(dec.u.columns(0, k), tol);
}

bool direct_sum_test(const Subspace& v, const Subspace& w, const Tolerance& tol) {
    require_same_ambient(v, w, "direct_sum_test");
    const std::size_t d = v.ambient_dim();
    const Subspace w_perp = ortho_complement(w, tol);
    if (v.dim() + w_perp.dim() != d) return false;
    if (d == 0) return true;
    return rank(hstack(v.basis(), w_perp.basis()), tol) == d;
}

} // namespace framekit
