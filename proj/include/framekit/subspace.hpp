#pragma once

#include <cstddef>
#include <span>

#include "framekit/numkernel.hpp"

namespace framekit {

/// Default threshold realizing "angle > 0" for cosine angles.
inline constexpr double kDefaultAngleTol = 1e-8;

/// A subspace of C^d held as a d x p matrix with orthonormal columns
/// (p = 0 for the zero subspace).
class Subspace {
public:
    /// Wraps an existing orthonormal basis; throws DomainError if
    /// basis^H basis deviates from I_p by more than tol.eq_tol.
    static Subspace from_orthonormal(ComplexMatrix basis, const Tolerance& tol = {});
    /// Column space of an arbitrary d x n matrix at the rank tolerance.
    static Subspace span_of(const ComplexMatrix& vectors, const Tolerance& tol = {});
    static Subspace zero(std::size_t ambient_dim);
    static Subspace full(std::size_t ambient_dim);

    std::size_t ambient_dim() const noexcept { return basis_.rows(); }
    std::size_t dim() const noexcept { return basis_.cols(); }
    const ComplexMatrix& basis() const noexcept { return basis_; }

    /// Orthogonal projector B B^H.
    ComplexMatrix projector() const;

private:
    explicit Subspace(ComplexMatrix basis) : basis_(std::move(basis)) {}
    ComplexMatrix basis_;
};

/// P_W v = B (B^H v).
CVector project(const Subspace& w, std::span<const Complex> v);

/// Singular values of W.basis^H V.basis, nonincreasing: the cosines of the
/// principal angles between V and W.
std::vector<double> principal_cosines(const Subspace& v, const Subspace& w);

/// Infimum cosine angle R(V, W) = inf over unit v in V of |P_W v|.
/// Returns 1 for the zero subspace V and 0 whenever dim W < dim V.
double inf_cos(const Subspace& v, const Subspace& w);

/// Supremum cosine angle S(V, W) = sup over unit v in V of |P_W v|.
/// Returns 0 when either subspace is zero.
double sup_cos(const Subspace& v, const Subspace& w);

Subspace ortho_complement(const Subspace& v, const Tolerance& tol = {});

/// True iff C^d = V (+) W^perp: dim V + dim W^perp = d and the concatenated
/// bases have full rank at tolerance.
bool direct_sum_test(const Subspace& v, const Subspace& w, const Tolerance& tol = {});

} // namespace framekit
