#pragma once

// Finite frame theory at one fiber: a family of r vectors in C^d, its
// Gramians and frame bounds, and the dual constructions (canonical,
// Parseval, oblique via the mixed Gramian, biorthogonal Riesz duals).

#include <cstddef>
#include <vector>

#include "framekit/numkernel.hpp"
#include "framekit/subspace.hpp"

namespace framekit {

/// r >= 1 generator vectors in C^d, stored as the d x r synthesis matrix
/// (column i is generator i). Zero generators are allowed.
class FiberSystem {
public:
    FiberSystem(std::size_t dim, const std::vector<CVector>& vectors);
    /// Throws DomainError when the matrix has no columns.
    explicit FiberSystem(ComplexMatrix synthesis);

    static FiberSystem zeros(std::size_t dim, std::size_t count);

    std::size_t dim() const noexcept { return synthesis_.rows(); }
    std::size_t count() const noexcept { return synthesis_.cols(); }
    CVector vector(std::size_t i) const { return synthesis_.column(i); }
    std::vector<CVector> vectors() const;
    const ComplexMatrix& synthesis() const noexcept { return synthesis_; }

    /// Appends zero generators up to `count` (no-op if already that long).
    FiberSystem padded(std::size_t count) const;

    bool is_zero() const { return synthesis_.max_abs() == 0.0; }

private:
    ComplexMatrix synthesis_;
};

struct GramianBundle {
    ComplexMatrix gram;  ///< r x r, gram(i, j) = <v_j, v_i>
    Subspace span;       ///< J(x) = span{v_i}
    double frame_lower;  ///< smallest nonzero eigenvalue of gram (1 for the zero system)
    double frame_upper;  ///< largest eigenvalue of gram (1 for the zero system)
};

GramianBundle gramian(const FiberSystem& a, const Tolerance& tol = {});

/// G_{A,B}(i, j) = <a_j, b_i>. Systems of different length are zero-padded
/// to the longer one first.
ComplexMatrix mixed_gramian(const FiberSystem& a, const FiberSystem& b);

/// d x d frame operator sum_i v_i v_i^H.
ComplexMatrix dual_gramian(const FiberSystem& a);

/// {S^+ v_i} with S the frame operator; reproduces every u in span(A).
FiberSystem canonical_dual(const FiberSystem& a, const Tolerance& tol = {});

/// v'_i = sum_j conj(((G^+)^{1/2})_{ij}) v_j: a Parseval frame for span(A).
FiberSystem parsevalize(const FiberSystem& a, const Tolerance& tol = {});

/// |G_A G_{A,A'} - G_A|_F / (1 + |G_A|_F). Throws ShapeError unless the
/// systems share dimension and generator count.
double alternate_dual_residual(const FiberSystem& a, const FiberSystem& alt);

/// True iff A' reproduces span(A): u = sum_i <u, a'_i> a_i.
bool is_alternate_dual(const FiberSystem& a, const FiberSystem& alt, const Tolerance& tol = {});

struct RankConditionReport {
    std::size_t rank_mixed;
    std::size_t dim_a;
    std::size_t dim_b;
    bool holds() const { return rank_mixed == dim_a && dim_a == dim_b; }
};

RankConditionReport rank_condition_report(const FiberSystem& a, const FiberSystem& b, const Tolerance& tol = {});

/// rank G_{A,A'} = dim span(A) = dim span(A').
bool rank_condition(const FiberSystem& a, const FiberSystem& b, const Tolerance& tol = {});

/// Oblique dual of A drawn from span(A'): h_i = sum_j conj((G_{A,A'}^+)_{ij}) a'_j.
/// Returns the zero system when span(A) = 0. Throws InfeasibleError when the
/// rank condition fails and NumericalFailure when the result does not pass
/// is_alternate_dual in both directions.
FiberSystem dualise(const FiberSystem& a, const FiberSystem& b, const Tolerance& tol = {});

struct RieszReport {
    bool is_riesz;
    double lower;  ///< smallest Gramian eigenvalue
    double upper;  ///< largest Gramian eigenvalue
};

RieszReport riesz_bounds(const FiberSystem& a, const Tolerance& tol = {});
bool is_riesz(const FiberSystem& a, const Tolerance& tol = {});

/// The unique family A' in W with <a_i, a'_j> = delta_ij, for a Riesz
/// system A and dim W = r. Throws PreconditionError if A is not Riesz,
/// ShapeError on a dimension mismatch, InfeasibleError if either infimum
/// cosine angle between span(A) and W is at most angle_tol.
FiberSystem biorth_riesz_dual(const FiberSystem& a, const Subspace& w, const Tolerance& tol = {},
                              double angle_tol = kDefaultAngleTol);

} // namespace framekit
