#include "framekit/fiberframe.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "framekit/error.hpp"

namespace framekit {

namespace {

void require_same_shape(const FiberSystem& a, const FiberSystem& b, const char* op) {
    if (a.dim() != b.dim() || a.count() != b.count()) {
        throw ShapeError(std::string(op) + ": systems differ in shape (" + std::to_string(a.dim()) + "x" +
                         std::to_string(a.count()) + " vs " + std::to_string(b.dim()) + "x" +
                         std::to_string(b.count()) + ")");
    }
}

// Nonzero singular values of the synthesis matrix at the rank cutoff.
std::vector<double> support_singular_values(const ComplexMatrix& synthesis, const Tolerance& tol) {
    const SvdResult d = svd(synthesis);
    std::vector<double> out;
    if (d.s.empty() || d.s.front() == 0.0) return out;
    const double cutoff = tol.rel_rank_tol * d.s.front();
    for (double s : d.s)
        if (s > cutoff) out.push_back(s);
    return out;
}

} // namespace

FiberSystem::FiberSystem(std::size_t dim, const std::vector<CVector>& vectors)
    : FiberSystem(ComplexMatrix::from_columns(vectors, dim)) {}

FiberSystem::FiberSystem(ComplexMatrix synthesis) : synthesis_(std::move(synthesis)) {
    if (synthesis_.cols() == 0) throw DomainError("fiber system needs at least one generator");
    if (synthesis_.rows() == 0) throw DomainError("fiber dimension must be positive");
    if (!synthesis_.all_finite()) throw DomainError("fiber system has non-finite entries");
}

FiberSystem FiberSystem::zeros(std::size_t dim, std::size_t count) { return FiberSystem(ComplexMatrix(dim, count)); }

std::vector<CVector> FiberSystem::vectors() const {
    std::vector<CVector> out;
    out.reserve(count());
    for (std::size_t i = 0; i < count(); ++i) out.push_back(vector(i));
    return out;
}

FiberSystem FiberSystem::padded(std::size_t count) const {
    if (count <= this->count()) return *this;
    return FiberSystem(hstack(synthesis_, ComplexMatrix(dim(), count - this->count())));
}

GramianBundle gramian(const FiberSystem& a, const Tolerance& tol) {
    const ComplexMatrix& f = a.synthesis();
    GramianBundle out{f.adjoint() * f, Subspace::span_of(f, tol), 1.0, 1.0};
    // Bounds from the synthesis singular values so that they share the rank
    // cutoff with `span`.
    const auto s = support_singular_values(f, tol);
    if (!s.empty()) {
        out.frame_upper = s.front() * s.front();
        out.frame_lower = s.back() * s.back();
    }
    return out;
}

ComplexMatrix mixed_gramian(const FiberSystem& a, const FiberSystem& b) {
    if (a.dim() != b.dim()) {
        throw ShapeError("mixed_gramian: fiber dimensions differ (" + std::to_string(a.dim()) + " vs " +
                         std::to_string(b.dim()) + ")");
    }
    const std::size_t r = std::max(a.count(), b.count());
    return b.padded(r).synthesis().adjoint() * a.padded(r).synthesis();
}

ComplexMatrix dual_gramian(const FiberSystem& a) { return a.synthesis() * a.synthesis().adjoint(); }

FiberSystem canonical_dual(const FiberSystem& a, const Tolerance& tol) {
    // S^+ F = (U S^-2 U^H)(U S V^H) = U S^-1 V^H = (F^+)^H.
    return FiberSystem(pinv(a.synthesis(), tol).adjoint());
}

FiberSystem parsevalize(const FiberSystem& a, const Tolerance& tol) {
    const ComplexMatrix& f = a.synthesis();
    const ComplexMatrix root = psd_power(f.adjoint() * f, -0.5, tol);
    // Column i of F * conj(P)^T; P is Hermitian so conj(P)^T = P.
    return FiberSystem(f * root.conjugate().transpose());
}

double alternate_dual_residual(const FiberSystem& a, const FiberSystem& alt) {
    require_same_shape(a, alt, "alternate dual check");
    const ComplexMatrix g = a.synthesis().adjoint() * a.synthesis();
    const ComplexMatrix defect = g * mixed_gramian(a, alt) - g;
    return defect.frobenius_norm() / (1.0 + g.frobenius_norm());
}

bool is_alternate_dual(const FiberSystem& a, const FiberSystem& alt, const Tolerance& tol) {
    return alternate_dual_residual(a, alt) <= tol.eq_tol;
}

RankConditionReport rank_condition_report(const FiberSystem& a, const FiberSystem& b, const Tolerance& tol) {
    require_same_shape(a, b, "rank condition");
    // Cutoff relative to |A| |B|, which bounds |B^H A|: a mixed Gramian made
    // only of rounding noise has rank 0, not full rank.
    const double scale = spectral_norm(a.synthesis()) * spectral_norm(b.synthesis());
    std::size_t rank_mixed = 0;
    if (scale > 0.0)
        for (double s : svd(mixed_gramian(a, b)).s)
            if (s > tol.rel_rank_tol * scale) ++rank_mixed;
    return {rank_mixed, rank(a.synthesis(), tol), rank(b.synthesis(), tol)};
}

bool rank_condition(const FiberSystem& a, const FiberSystem& b, const Tolerance& tol) {
    return rank_condition_report(a, b, tol).holds();
}

FiberSystem dualise(const FiberSystem& a, const FiberSystem& b, const Tolerance& tol) {
    const RankConditionReport rc = rank_condition_report(a, b, tol);
    if (rc.dim_a == 0) return FiberSystem::zeros(a.dim(), a.count());
    if (!rc.holds()) {
        throw InfeasibleError("dualise: rank condition violated (rank G_{A,A'} = " + std::to_string(rc.rank_mixed) +
                              ", dim J_A = " + std::to_string(rc.dim_a) + ", dim J_A' = " +
                              std::to_string(rc.dim_b) + ")");
    }
    const ComplexMatrix g_pinv = pinv(mixed_gramian(a, b), tol);
    // h_i = sum_j conj(G+_{ij}) b_j, i.e. H = B * (G+)^H.
    FiberSystem h(b.synthesis() * g_pinv.adjoint());
    const double forward = alternate_dual_residual(a, h);
    const double backward = alternate_dual_residual(h, a);
    if (forward > tol.eq_tol || backward > tol.eq_tol) {
        throw NumericalFailure("dualise: constructed dual fails reproduction (residuals " + std::to_string(forward) +
                               ", " + std::to_string(backward) + ")");
    }
    return h;
}

RieszReport riesz_bounds(const FiberSystem& a, const Tolerance& tol) {
    const auto s = support_singular_values(a.synthesis(), tol);
    RieszReport out{s.size() == a.count(), 0.0, 0.0};
    if (!s.empty()) out.upper = s.front() * s.front();
    if (out.is_riesz) out.lower = s.back() * s.back();
    return out;
}

bool is_riesz(const FiberSystem& a, const Tolerance& tol) { return riesz_bounds(a, tol).is_riesz; }

FiberSystem biorth_riesz_dual(const FiberSystem& a, const Subspace& w, const Tolerance& tol, double angle_tol) {
    if (w.ambient_dim() != a.dim()) {
        throw ShapeError("biorth_riesz_dual: subspace lives in C^" + std::to_string(w.ambient_dim()) +
                         ", system in C^" + std::to_string(a.dim()));
    }
    if (w.dim() != a.count()) {
        throw ShapeError("biorth_riesz_dual: dim W = " + std::to_string(w.dim()) + " but the system has " +
                         std::to_string(a.count()) + " generators");
    }
    if (!is_riesz(a, tol)) throw PreconditionError("biorth_riesz_dual: system is not a Riesz sequence");
    const Subspace span = Subspace::span_of(a.synthesis(), tol);
    const double r_aw = inf_cos(span, w);
    const double r_wa = inf_cos(w, span);
    if (!(r_aw > angle_tol && r_wa > angle_tol)) {
        throw InfeasibleError("biorth_riesz_dual: subspaces not in duality (R(J,W) = " + std::to_string(r_aw) +
                              ", R(W,J) = " + std::to_string(r_wa) + ")");
    }
    // a'_j = sum_k c_jk w_k with Y = W^H F; biorthogonality gives a' = W (Y^-1)^H.
    const ComplexMatrix y = w.basis().adjoint() * a.synthesis();
    const ComplexMatrix y_inv = solve(y, ComplexMatrix::identity(y.rows()));
    return FiberSystem(w.basis() * y_inv.adjoint());
}

} // namespace framekit
