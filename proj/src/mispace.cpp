#include "framekit/mispace.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <set>

#include "framekit/error.hpp"

namespace framekit {

namespace {

void require_same_model(const FiberedSystem& a, const FiberedSystem& b, const char* op) {
    if (a.measure() != b.measure()) throw ShapeError(std::string(op) + ": systems live on different measure models");
    if (a.fiber_dim() != b.fiber_dim()) {
        throw ShapeError(std::string(op) + ": fiber dimensions differ (" + std::to_string(a.fiber_dim()) + " vs " +
                         std::to_string(b.fiber_dim()) + ")");
    }
}

void require_function_shape(const FiberedSystem& s, const FiberedFunction& f, const char* op) {
    if (f.atoms() != s.atoms() || f.fiber_dim() != s.fiber_dim()) {
        throw ShapeError(std::string(op) + ": function has " + std::to_string(f.atoms()) + " atoms in C^" +
                         std::to_string(f.fiber_dim()) + ", system has " + std::to_string(s.atoms()) +
                         " atoms in C^" + std::to_string(s.fiber_dim()));
    }
}

// sum_i <u, alt_i> a_i
CVector mixed_apply(const FiberSystem& a, const FiberSystem& alt, const CVector& u) {
    const CVector coeffs = alt.synthesis().adjoint() * std::span<const Complex>(u);
    return a.synthesis() * std::span<const Complex>(coeffs);
}

double relative_gap(const CVector& u, const CVector& u_hat) {
    const double gap = distance(u, u_hat);
    const double len = norm(u);
    return len > 0.0 ? gap / len : gap;
}

class ProbeSource {
public:
    explicit ProbeSource(std::uint64_t seed) : rng_(seed) {}

    CVector span_element(const FiberSystem& s) {
        CVector c(s.count());
        for (auto& z : c) {
            const double re = normal_(rng_);
            const double im = normal_(rng_);
            z = {re, im};
        }
        return s.synthesis() * std::span<const Complex>(c);
    }

private:
    std::mt19937_64 rng_;
    std::normal_distribution<double> normal_{0.0, 1.0};
};

// Worst relative residual of u = sum_i <u, dual_i> frame_i over the
// generators of `source` and random elements of its span.
double local_probe_residual(const FiberSystem& source, const FiberSystem& frame, const FiberSystem& dual,
                            ProbeSource& probes) {
    double worst = 0.0;
    for (std::size_t i = 0; i < source.count(); ++i) {
        const CVector u = source.vector(i);
        worst = std::max(worst, relative_gap(u, mixed_apply(frame, dual, u)));
    }
    for (std::size_t k = 0; k < kProbesPerFiber; ++k) {
        const CVector u = probes.span_element(source);
        worst = std::max(worst, relative_gap(u, mixed_apply(frame, dual, u)));
    }
    return worst;
}

double global_gap(const MeasureModel& m, const FiberedFunction& g, const FiberedFunction& g_hat) {
    FiberedFunction diff = g;
    for (std::size_t k = 0; k < diff.atoms(); ++k)
        for (std::size_t j = 0; j < diff.fiber_dim(); ++j) diff.at(k)[j] -= g_hat.at(k)[j];
    const double gap = weighted_norm(m, diff);
    const double len = weighted_norm(m, g);
    return len > 0.0 ? gap / len : gap;
}

double global_probe_residual(const FiberedSystem& source, const FiberedSystem& frame, const FiberedSystem& dual,
                             ProbeSource& probes) {
    double worst = 0.0;
    for (std::size_t i = 0; i < source.count(); ++i) {
        const FiberedFunction g = source.generator(i);
        worst = std::max(worst, global_gap(source.measure(), g, apply_mixed_frame_operator(frame, dual, g)));
    }
    for (std::size_t k = 0; k < kProbesPerFiber; ++k) {
        std::vector<CVector> values;
        values.reserve(source.atoms());
        for (const auto& f : source.fibers()) values.push_back(probes.span_element(f));
        const FiberedFunction g(source.fiber_dim(), std::move(values));
        worst = std::max(worst, global_gap(source.measure(), g, apply_mixed_frame_operator(frame, dual, g)));
    }
    return worst;
}

} // namespace

MeasureModel::MeasureModel(std::vector<std::string> ids, std::vector<double> weights)
    : ids_(std::move(ids)), weights_(std::move(weights)) {
    if (ids_.size() != weights_.size()) {
        throw ShapeError("measure model: " + std::to_string(ids_.size()) + " ids but " +
                         std::to_string(weights_.size()) + " weights");
    }
    if (ids_.empty()) throw DomainError("measure model needs at least one atom");
    std::set<std::string> seen;
    for (std::size_t k = 0; k < ids_.size(); ++k) {
        if (!seen.insert(ids_[k]).second) throw DomainError("measure model: duplicate atom id '" + ids_[k] + "'");
        if (!std::isfinite(weights_[k]) || weights_[k] <= 0.0) {
            throw DomainError("measure model: atom '" + ids_[k] + "' has non-positive weight");
        }
        total_mass_ += weights_[k];
    }
}

MeasureModel MeasureModel::uniform(std::size_t atoms, double weight) {
    std::vector<std::string> ids;
    for (std::size_t k = 0; k < atoms; ++k) ids.push_back("x" + std::to_string(k));
    return MeasureModel(std::move(ids), std::vector<double>(atoms, weight));
}

FiberedSystem::FiberedSystem(MeasureModel measure, std::size_t fiber_dim, std::vector<FiberSystem> fibers)
    : measure_(std::move(measure)), fiber_dim_(fiber_dim), fibers_(std::move(fibers)) {
    if (fibers_.size() != measure_.size()) {
        throw ShapeError("fibered system: " + std::to_string(fibers_.size()) + " fibers for " +
                         std::to_string(measure_.size()) + " atoms");
    }
    const std::size_t r = fibers_.front().count();
    for (std::size_t k = 0; k < fibers_.size(); ++k) {
        if (fibers_[k].dim() != fiber_dim_ || fibers_[k].count() != r) {
            throw ShapeError("fibered system: atom '" + measure_.id(k) + "' has " +
                             std::to_string(fibers_[k].count()) + " vectors in C^" +
                             std::to_string(fibers_[k].dim()) + ", expected " + std::to_string(r) + " in C^" +
                             std::to_string(fiber_dim_));
        }
    }
}

FiberedSystem FiberedSystem::padded(std::size_t count) const {
    std::vector<FiberSystem> out;
    out.reserve(fibers_.size());
    for (const auto& f : fibers_) out.push_back(f.padded(count));
    return FiberedSystem(measure_, fiber_dim_, std::move(out));
}

FiberedFunction FiberedSystem::generator(std::size_t i) const {
    std::vector<CVector> values;
    values.reserve(fibers_.size());
    for (const auto& f : fibers_) values.push_back(f.vector(i));
    return FiberedFunction(fiber_dim_, std::move(values));
}

FiberedFunction::FiberedFunction(std::size_t fiber_dim, std::vector<CVector> values)
    : fiber_dim_(fiber_dim), values_(std::move(values)) {
    for (std::size_t k = 0; k < values_.size(); ++k) {
        if (values_[k].size() != fiber_dim_) {
            throw ShapeError("fibered function: atom " + std::to_string(k) + " has length " +
                             std::to_string(values_[k].size()) + ", expected " + std::to_string(fiber_dim_));
        }
        for (const auto& z : values_[k])
            if (!std::isfinite(z.real()) || !std::isfinite(z.imag()))
                throw DomainError("fibered function: non-finite value at atom " + std::to_string(k));
    }
}

FiberedFunction FiberedFunction::zeros(std::size_t atoms, std::size_t fiber_dim) {
    return FiberedFunction(fiber_dim, std::vector<CVector>(atoms, CVector(fiber_dim)));
}

Complex weighted_inner(const MeasureModel& m, const FiberedFunction& f, const FiberedFunction& g) {
    if (f.atoms() != m.size() || g.atoms() != m.size() || f.fiber_dim() != g.fiber_dim()) {
        throw ShapeError("weighted_inner: shapes do not match the measure model");
    }
    Complex acc = 0.0;
    for (std::size_t k = 0; k < m.size(); ++k) acc += m.weight(k) * inner(f.at(k), g.at(k));
    return acc;
}

double weighted_norm(const MeasureModel& m, const FiberedFunction& f) {
    return std::sqrt(std::max(0.0, weighted_inner(m, f, f).real()));
}

FrameBounds global_frame_bounds(const FiberedSystem& s, const Tolerance& tol) {
    bool any_active = false;
    double lower = 0.0;
    double upper = 0.0;
    for (const auto& f : s.fibers()) {
        const GramianBundle g = gramian(f, tol);
        if (g.span.dim() == 0) continue;
        lower = any_active ? std::min(lower, g.frame_lower) : g.frame_lower;
        upper = any_active ? std::max(upper, g.frame_upper) : g.frame_upper;
        any_active = true;
    }
    if (!any_active) return {1.0, 1.0, true};
    return {lower, upper, lower > tol.rel_rank_tol * upper};
}

double global_inf_cos(const FiberedSystem& a, const FiberedSystem& b, const Tolerance& tol) {
    require_same_model(a, b, "global_inf_cos");
    double out = 1.0;
    for (std::size_t k = 0; k < a.atoms(); ++k) {
        const Subspace ja = Subspace::span_of(a.fiber(k).synthesis(), tol);
        if (ja.dim() == 0) continue;
        out = std::min(out, inf_cos(ja, Subspace::span_of(b.fiber(k).synthesis(), tol)));
    }
    return out;
}

FiberedFunction apply_mixed_frame_operator(const FiberedSystem& a, const FiberedSystem& alt,
                                           const FiberedFunction& f) {
    require_same_model(a, alt, "apply_mixed_frame_operator");
    if (a.count() != alt.count()) {
        throw ShapeError("apply_mixed_frame_operator: generator counts differ (" + std::to_string(a.count()) +
                         " vs " + std::to_string(alt.count()) + ")");
    }
    require_function_shape(a, f, "apply_mixed_frame_operator");
    std::vector<CVector> out;
    out.reserve(a.atoms());
    for (std::size_t k = 0; k < a.atoms(); ++k) out.push_back(mixed_apply(a.fiber(k), alt.fiber(k), f.at(k)));
    return FiberedFunction(a.fiber_dim(), std::move(out));
}

EquivalenceReport verify_theorem1(const FiberedSystem& a, const FiberedSystem& b, const Tolerance& tol,
                                  const VerifyOptions& opts) {
    require_same_model(a, b, "verify_theorem1");
    if (!global_frame_bounds(a, tol).is_frame) throw PreconditionError("verify_theorem1: A is not a frame for its span");
    if (!global_frame_bounds(b, tol).is_frame) throw PreconditionError("verify_theorem1: B is not a frame for its span");

    EquivalenceReport rep;
    rep.r_ab = global_inf_cos(a, b, tol);
    rep.r_ba = global_inf_cos(b, a, tol);
    rep.holds_ii = rep.r_ab > opts.angle_tol && rep.r_ba > opts.angle_tol;

    // Common length r, then a Parseval frame for each range function.
    const std::size_t r = std::max(a.count(), b.count());
    const FiberedSystem ap = a.padded(r);
    const FiberedSystem bp = b.padded(r);

    rep.holds_iv = true;
    bool constructed = true;
    double worst_angle = 2.0;
    double max_pinv = 0.0;
    std::vector<FiberSystem> a_dual;
    std::vector<FiberSystem> b_dual;
    for (std::size_t k = 0; k < a.atoms(); ++k) {
        const Subspace ja = Subspace::span_of(ap.fiber(k).synthesis(), tol);
        const Subspace jb = Subspace::span_of(bp.fiber(k).synthesis(), tol);
        FiberDiagnostics diag{a.measure().id(k), ja.dim(), jb.dim(), inf_cos(ja, jb), inf_cos(jb, ja), 0, 0.0};
        if (!(diag.r_ab > opts.angle_tol && diag.r_ba > opts.angle_tol)) rep.holds_iv = false;
        if (std::min(diag.r_ab, diag.r_ba) < worst_angle) {
            worst_angle = std::min(diag.r_ab, diag.r_ba);
            rep.worst_fiber = k;
        }

        const FiberSystem pa = parsevalize(ap.fiber(k), tol);
        const FiberSystem pb = parsevalize(bp.fiber(k), tol);
        const ComplexMatrix g = mixed_gramian(pa, pb);
        diag.rank_mixed = rank_condition_report(pa, pb, tol).rank_mixed;
        diag.pinv_norm = diag.rank_mixed == 0 ? 0.0 : 1.0 / svd(g).s[diag.rank_mixed - 1];
        max_pinv = std::max(max_pinv, diag.pinv_norm);
        rep.diagnostics.push_back(diag);

        if (!constructed) continue;
        try {
            b_dual.push_back(dualise(pa, pb, tol));
            a_dual.push_back(pa);
        } catch (const InfeasibleError&) {
            constructed = false;
        } catch (const NumericalFailure&) {
            constructed = false;
        }
    }
    if (!constructed) return rep;

    WitnessPair w{FiberedSystem(a.measure(), a.fiber_dim(), std::move(a_dual)),
                  FiberedSystem(a.measure(), a.fiber_dim(), std::move(b_dual))};

    ProbeSource local_probes(opts.probe_seed);
    for (std::size_t k = 0; k < a.atoms(); ++k) {
        const FiberSystem& fa = w.a_dual.fiber(k);
        const FiberSystem& fb = w.b_dual.fiber(k);
        rep.local_residual = std::max(rep.local_residual, local_probe_residual(ap.fiber(k), fa, fb, local_probes));
        rep.local_residual = std::max(rep.local_residual, local_probe_residual(bp.fiber(k), fb, fa, local_probes));
    }
    rep.holds_iii = rep.local_residual <= tol.eq_tol;

    ProbeSource global_probes(opts.probe_seed ^ 0x9e3779b97f4a7c15ULL);
    rep.global_residual = std::max(global_probe_residual(ap, w.a_dual, w.b_dual, global_probes),
                                   global_probe_residual(bp, w.b_dual, w.a_dual, global_probes));
    rep.holds_i = rep.global_residual <= tol.eq_tol;

    if (rep.holds_i || rep.holds_iii) {
        rep.witness_status = max_pinv <= opts.c_max ? WitnessStatus::certified : WitnessStatus::unverified_bound;
        rep.witnesses = std::move(w);
    }
    return rep;
}

BiorthReport verify_theorem2(const FiberedSystem& a, const std::vector<Subspace>& w, const Tolerance& tol,
                             double angle_tol) {
    if (w.size() != a.atoms()) {
        throw ShapeError("verify_theorem2: " + std::to_string(w.size()) + " subspaces for " +
                         std::to_string(a.atoms()) + " atoms");
    }
    BiorthReport rep;
    for (std::size_t k = 0; k < a.atoms(); ++k) {
        const RieszReport rz = riesz_bounds(a.fiber(k), tol);
        if (!rz.is_riesz) {
            throw PreconditionError("verify_theorem2: fiber at atom '" + a.measure().id(k) + "' is not Riesz");
        }
        rep.riesz_lower = k == 0 ? rz.lower : std::min(rep.riesz_lower, rz.lower);
        rep.riesz_upper = std::max(rep.riesz_upper, rz.upper);
    }

    std::vector<FiberSystem> duals;
    for (std::size_t k = 0; k < a.atoms(); ++k) {
        const FiberSystem& f = a.fiber(k);
        if (w[k].ambient_dim() != f.dim() || w[k].dim() != f.count()) {
            throw ShapeError("verify_theorem2: subspace at atom '" + a.measure().id(k) + "' has dimension " +
                             std::to_string(w[k].dim()) + " in C^" + std::to_string(w[k].ambient_dim()) +
                             ", expected " + std::to_string(f.count()) + " in C^" + std::to_string(f.dim()));
        }
        const Subspace j = Subspace::span_of(f.synthesis(), tol);
        const double r_jw = inf_cos(j, w[k]);
        const double r_wj = inf_cos(w[k], j);
        if (!(r_jw > angle_tol && r_wj > angle_tol)) {
            rep.failing_atom = k;
            rep.failing_r_aw = r_jw;
            rep.failing_r_wa = r_wj;
            return rep;
        }
        FiberSystem d = biorth_riesz_dual(f, w[k], tol, angle_tol);
        const ComplexMatrix cross = d.synthesis().adjoint() * f.synthesis();
        rep.biorth_residual =
            std::max(rep.biorth_residual, (cross - ComplexMatrix::identity(f.count())).max_abs());
        duals.push_back(std::move(d));
    }
    rep.success = true;
    rep.dual = FiberedSystem(a.measure(), a.fiber_dim(), std::move(duals));
    return rep;
}

Reconstruction reconstruct(const FiberedSystem& a, const FiberedSystem& dual, const FiberedFunction& f) {
    FiberedFunction value = apply_mixed_frame_operator(a, dual, f);
    FiberedFunction diff = f;
    for (std::size_t k = 0; k < diff.atoms(); ++k)
        for (std::size_t j = 0; j < diff.fiber_dim(); ++j) diff.at(k)[j] -= value.at(k)[j];
    const double len = std::max(weighted_norm(a.measure(), f), std::numeric_limits<double>::min());
    return {std::move(value), weighted_norm(a.measure(), diff) / len};
}

} // namespace framekit
