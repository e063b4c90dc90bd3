#pragma once

// Zak transform for a finite group G with a cyclic subgroup Gamma:
// f -> (alpha -> coset-wise Fourier coefficients over Gamma). Turns
// Gamma-translates into multiplications on the dual group.

#include <cstddef>
#include <string>
#include <vector>

#include "framekit/mispace.hpp"
#include "framekit/numkernel.hpp"

namespace framekit {

/// Group law on indices 0..N-1 with identity 0.
class FiniteGroup {
public:
    /// Z_n under addition mod n.
    static FiniteGroup cyclic(std::size_t n);
    /// D_n of order 2n: index a + n*e stands for r^a s^e.
    static FiniteGroup dihedral(std::size_t n);
    /// Validates closure, identity at 0, inverses and associativity.
    static FiniteGroup from_table(std::vector<std::vector<std::size_t>> table);

    std::size_t order() const noexcept { return table_.size(); }
    std::size_t mul(std::size_t a, std::size_t b) const { return table_[a][b]; }
    std::size_t inverse(std::size_t a) const { return inverse_[a]; }
    const std::string& kind() const noexcept { return kind_; }
    /// n for cyclic / dihedral, N for tables.
    std::size_t parameter() const noexcept { return parameter_; }
    const std::vector<std::vector<std::size_t>>& table() const noexcept { return table_; }

private:
    FiniteGroup(std::string kind, std::size_t parameter, std::vector<std::vector<std::size_t>> table);
    std::string kind_;
    std::size_t parameter_;
    std::vector<std::vector<std::size_t>> table_;
    std::vector<std::size_t> inverse_;
};

/// Parses "z<N>" or "d<n>" (d4 is the dihedral group of order 8).
FiniteGroup group_from_name(const std::string& name);

struct ZakPlan {
    FiniteGroup group;
    std::size_t generator;               ///< g0
    std::vector<std::size_t> powers;     ///< powers[m] = g0^m, m < q
    std::vector<std::size_t> subgroup;   ///< Gamma, sorted
    std::vector<std::size_t> section;    ///< least element of each right coset Gamma x, ascending
    std::vector<std::size_t> coset_of;   ///< element -> coset index c
    std::vector<std::size_t> power_of;   ///< element g = g0^m * section[c] -> m
    ComplexMatrix characters;            ///< characters(k, m) = alpha_k(g0^m) = exp(2 pi i k m / q)

    std::size_t q() const noexcept { return powers.size(); }
    std::size_t p() const noexcept { return section.size(); }
};

/// Throws DomainError for an out-of-range generator.
ZakPlan build_plan(const FiniteGroup& group, std::size_t subgroup_generator);

/// q atoms alpha_0..alpha_{q-1}, each of weight 1/q.
MeasureModel character_measure(const ZakPlan& plan);

using GroupSignal = CVector;

/// Zf(alpha_k)[c] = sum_m f(g0^m section[c]) conj(alpha_k(g0^m)).
FiberedFunction zak_forward(const ZakPlan& plan, const GroupSignal& f);
GroupSignal zak_inverse(const ZakPlan& plan, const FiberedFunction& zf);

bool in_subgroup(const ZakPlan& plan, std::size_t element);

/// (L_gamma f)(g) = f(gamma^-1 g). Throws DomainError when gamma is not in Gamma.
GroupSignal translate(const ZakPlan& plan, const GroupSignal& f, std::size_t gamma);

/// conj(alpha_k(gamma)) for each character.
std::vector<Complex> multiplier(const ZakPlan& plan, std::size_t gamma);

/// Atom alpha holds {Zf_i(alpha)}_i. Throws DomainError for an empty list.
FiberedSystem tg_to_mg(const ZakPlan& plan, const std::vector<GroupSignal>& generators);

/// Generator i recovered from the fibered system (inverse of tg_to_mg).
std::vector<GroupSignal> mg_to_tg(const ZakPlan& plan, const FiberedSystem& system);

/// max |Z(L_gamma f) - conj(alpha(gamma)) Zf| over all fibers.
double verify_intertwine(const ZakPlan& plan, const GroupSignal& f, std::size_t gamma);

/// Named test signals: "delta<g>" or "ones".
GroupSignal named_signal(const ZakPlan& plan, const std::string& name);

} // namespace framekit
