#pragma once

// Fibered model of multiplication-invariant spaces over a finite weighted
// point set X. Everything global reduces to per-atom fiber computations.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "framekit/fiberframe.hpp"
#include "framekit/numkernel.hpp"
#include "framekit/subspace.hpp"

namespace framekit {

inline constexpr double kDefaultCMax = 1e8;
inline constexpr std::uint64_t kDefaultProbeSeed = 0x6a09e667f3bcc908ULL;
inline constexpr std::size_t kProbesPerFiber = 32;

class FiberedFunction;

/// Atoms of X with their masses mu({x}).
class MeasureModel {
public:
    /// Throws DomainError on empty input, duplicate ids, or a weight that is
    /// not finite and positive; ShapeError if the lengths differ.
    MeasureModel(std::vector<std::string> ids, std::vector<double> weights);
    static MeasureModel uniform(std::size_t atoms, double weight);

    std::size_t size() const noexcept { return ids_.size(); }
    const std::string& id(std::size_t k) const { return ids_.at(k); }
    double weight(std::size_t k) const { return weights_.at(k); }
    const std::vector<std::string>& ids() const noexcept { return ids_; }
    const std::vector<double>& weights() const noexcept { return weights_; }
    double total_mass() const noexcept { return total_mass_; }

    bool operator==(const MeasureModel&) const = default;

private:
    std::vector<std::string> ids_;
    std::vector<double> weights_;
    double total_mass_ = 0.0;
};

/// One fiber system per atom, all in C^fiber_dim with a common count r.
class FiberedSystem {
public:
    FiberedSystem(MeasureModel measure, std::size_t fiber_dim, std::vector<FiberSystem> fibers);

    const MeasureModel& measure() const noexcept { return measure_; }
    std::size_t fiber_dim() const noexcept { return fiber_dim_; }
    std::size_t count() const noexcept { return fibers_.front().count(); }
    std::size_t atoms() const noexcept { return fibers_.size(); }
    const FiberSystem& fiber(std::size_t k) const { return fibers_.at(k); }
    const std::vector<FiberSystem>& fibers() const noexcept { return fibers_; }

    FiberedSystem padded(std::size_t count) const;
    /// Generator i as a function on X.
    FiberedFunction generator(std::size_t i) const;

private:
    MeasureModel measure_;
    std::size_t fiber_dim_;
    std::vector<FiberSystem> fibers_;
};

/// f in L^2(X; C^d): one vector per atom.
class FiberedFunction {
public:
    FiberedFunction(std::size_t fiber_dim, std::vector<CVector> values);
    static FiberedFunction zeros(std::size_t atoms, std::size_t fiber_dim);

    std::size_t atoms() const noexcept { return values_.size(); }
    std::size_t fiber_dim() const noexcept { return fiber_dim_; }
    const CVector& at(std::size_t k) const { return values_.at(k); }
    CVector& at(std::size_t k) { return values_.at(k); }
    const std::vector<CVector>& values() const noexcept { return values_; }

private:
    std::size_t fiber_dim_;
    std::vector<CVector> values_;
};

/// sum_x w(x) <f(x), g(x)>
Complex weighted_inner(const MeasureModel& m, const FiberedFunction& f, const FiberedFunction& g);
double weighted_norm(const MeasureModel& m, const FiberedFunction& f);

struct FrameBounds {
    double lower;
    double upper;
    bool is_frame;
};

/// Min / max of the fiber bounds over atoms with a nonzero span; (1, 1) if
/// every fiber is zero. is_frame requires lower > rel_rank_tol * upper.
FrameBounds global_frame_bounds(const FiberedSystem& s, const Tolerance& tol = {});

/// Minimum of inf_cos(J_A(x), J_B(x)) over atoms with J_A(x) != 0; 1 if none.
double global_inf_cos(const FiberedSystem& a, const FiberedSystem& b, const Tolerance& tol = {});

/// Per atom: sum_i <f(x), a'_i(x)> a_i(x).
FiberedFunction apply_mixed_frame_operator(const FiberedSystem& a, const FiberedSystem& alt, const FiberedFunction& f);

struct FiberDiagnostics {
    std::string atom;
    std::size_t dim_ja;
    std::size_t dim_jb;
    double r_ab;
    double r_ba;
    std::size_t rank_mixed;
    double pinv_norm;  ///< spectral norm of G_{A',B'}^+ for the Parseval pair
};

enum class WitnessStatus { none, certified, unverified_bound };

struct WitnessPair {
    FiberedSystem a_dual;  ///< A': Parseval frame for J_A at every atom
    FiberedSystem b_dual;  ///< B': oblique dual of A' drawn from J_B
};

struct VerifyOptions {
    double angle_tol = kDefaultAngleTol;
    double c_max = kDefaultCMax;
    std::uint64_t probe_seed = kDefaultProbeSeed;
};

struct EquivalenceReport {
    bool holds_i = false;
    bool holds_ii = false;
    bool holds_iii = false;
    bool holds_iv = false;
    double r_ab = 0.0;
    double r_ba = 0.0;
    std::size_t worst_fiber = 0;
    double global_residual = 0.0;  ///< worst relative residual of the global formulas
    double local_residual = 0.0;   ///< worst relative residual of the fiber formulas
    WitnessStatus witness_status = WitnessStatus::none;
    std::optional<WitnessPair> witnesses;
    std::vector<FiberDiagnostics> diagnostics;

    bool all_true() const { return holds_i && holds_ii && holds_iii && holds_iv; }
    bool all_false() const { return !holds_i && !holds_ii && !holds_iii && !holds_iv; }
};

/// Evaluates the four equivalent conditions for the pair of MI spaces
/// generated by a and b: (i) global oblique reproducing formulas, (ii)
/// positive global angles, (iii) fiberwise oblique reproducing formulas,
/// (iv) positive fiber angles. Throws PreconditionError when either input
/// is not a frame for its span and ShapeError on model mismatch.
EquivalenceReport verify_theorem1(const FiberedSystem& a, const FiberedSystem& b, const Tolerance& tol = {},
                                  const VerifyOptions& opts = {});

struct BiorthReport {
    bool success = false;
    double riesz_lower = 0.0;
    double riesz_upper = 0.0;
    std::optional<std::size_t> failing_atom;
    double failing_r_aw = 0.0;
    double failing_r_wa = 0.0;
    std::optional<FiberedSystem> dual;
    double biorth_residual = 0.0;  ///< max_x max_ij |<f_i(x), f'_j(x)> - delta_ij|
};

/// Biorthogonal dual of a fiberwise Riesz system inside W(x) at every atom.
/// Throws PreconditionError when a fiber is not Riesz.
BiorthReport verify_theorem2(const FiberedSystem& a, const std::vector<Subspace>& w, const Tolerance& tol = {},
                             double angle_tol = kDefaultAngleTol);

struct Reconstruction {
    FiberedFunction value;
    double rel_residual;
};

Reconstruction reconstruct(const FiberedSystem& a, const FiberedSystem& dual, const FiberedFunction& f);

} // namespace framekit
