#include "framekit/zak.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <numbers>

#include "framekit/error.hpp"

namespace framekit {

namespace {

// exp(2 pi i j / q), exact at quarter turns.
Complex unit_root(std::size_t j, std::size_t q) {
    j %= q;
    if ((4 * j) % q == 0) {
        switch (4 * j / q) {
        case 0: return {1.0, 0.0};
        case 1: return {0.0, 1.0};
        case 2: return {-1.0, 0.0};
        default: return {0.0, -1.0};
        }
    }
    const double theta = 2.0 * std::numbers::pi * static_cast<double>(j) / static_cast<double>(q);
    return {std::cos(theta), std::sin(theta)};
}

void require_signal(const ZakPlan& plan, const GroupSignal& f, const char* op) {
    if (f.size() != plan.group.order()) {
        throw ShapeError(std::string(op) + ": signal has length " + std::to_string(f.size()) + ", group order is " +
                         std::to_string(plan.group.order()));
    }
    for (const auto& z : f)
        if (!std::isfinite(z.real()) || !std::isfinite(z.imag()))
            throw DomainError(std::string(op) + ": non-finite signal value");
}

void require_gamma(const ZakPlan& plan, std::size_t gamma, const char* op) {
    if (!in_subgroup(plan, gamma)) {
        throw DomainError(std::string(op) + ": element " + std::to_string(gamma) + " is not in the subgroup");
    }
}

std::size_t parse_count(const std::string& text, const std::string& what) {
    std::size_t value = 0;
    const auto* end = text.data() + text.size();
    const auto res = std::from_chars(text.data(), end, value);
    if (text.empty() || res.ec != std::errc() || res.ptr != end) throw DomainError("cannot parse " + what + " '" + text + "'");
    return value;
}

} // namespace

FiniteGroup::FiniteGroup(std::string kind, std::size_t parameter, std::vector<std::vector<std::size_t>> table)
    : kind_(std::move(kind)), parameter_(parameter), table_(std::move(table)), inverse_(table_.size()) {
    for (std::size_t a = 0; a < table_.size(); ++a)
        for (std::size_t b = 0; b < table_.size(); ++b)
            if (table_[a][b] == 0) inverse_[a] = b;
}

FiniteGroup FiniteGroup::cyclic(std::size_t n) {
    if (n == 0) throw DomainError("cyclic group needs positive order");
    std::vector<std::vector<std::size_t>> t(n, std::vector<std::size_t>(n));
    for (std::size_t a = 0; a < n; ++a)
        for (std::size_t b = 0; b < n; ++b) t[a][b] = (a + b) % n;
    return FiniteGroup("cyclic", n, std::move(t));
}

FiniteGroup FiniteGroup::dihedral(std::size_t n) {
    if (n == 0) throw DomainError("dihedral group needs n >= 1");
    const std::size_t order = 2 * n;
    std::vector<std::vector<std::size_t>> t(order, std::vector<std::size_t>(order));
    for (std::size_t x = 0; x < order; ++x) {
        for (std::size_t y = 0; y < order; ++y) {
            const std::size_t a = x % n, e = x / n;
            const std::size_t b = y % n, f = y / n;
            // r^a s^e r^b s^f = r^(a + (-1)^e b) s^(e + f)
            const std::size_t rot = e == 0 ? (a + b) % n : (a + n - b) % n;
            t[x][y] = rot + n * ((e + f) % 2);
        }
    }
    return FiniteGroup("dihedral", n, std::move(t));
}

FiniteGroup FiniteGroup::from_table(std::vector<std::vector<std::size_t>> table) {
    const std::size_t n = table.size();
    if (n == 0) throw DomainError("group table is empty");
    for (std::size_t a = 0; a < n; ++a) {
        if (table[a].size() != n) throw ShapeError("group table row " + std::to_string(a) + " has wrong length");
        for (std::size_t b = 0; b < n; ++b) {
            if (table[a][b] >= n) throw DomainError("group table entry out of range at (" + std::to_string(a) + ", " + std::to_string(b) + ")");
        }
        if (table[0][a] != a || table[a][0] != a) throw DomainError("group table: index 0 is not the identity");
    }
    for (std::size_t a = 0; a < n; ++a) {
        bool has_inverse = false;
        for (std::size_t b = 0; b < n; ++b) has_inverse = has_inverse || (table[a][b] == 0 && table[b][a] == 0);
        if (!has_inverse) throw DomainError("group table: element " + std::to_string(a) + " has no inverse");
    }
    for (std::size_t a = 0; a < n; ++a)
        for (std::size_t b = 0; b < n; ++b)
            for (std::size_t c = 0; c < n; ++c)
                if (table[table[a][b]][c] != table[a][table[b][c]])
                    throw DomainError("group table is not associative");
    return FiniteGroup("table", n, std::move(table));
}

FiniteGroup group_from_name(const std::string& name) {
    if (name.size() >= 2 && (name[0] == 'z' || name[0] == 'Z')) return FiniteGroup::cyclic(parse_count(name.substr(1), "group"));
    if (name.size() >= 2 && (name[0] == 'd' || name[0] == 'D')) return FiniteGroup::dihedral(parse_count(name.substr(1), "group"));
    throw DomainError("unknown group '" + name + "' (expected z<N> or d<n>)");
}

ZakPlan build_plan(const FiniteGroup& group, std::size_t subgroup_generator) {
    const std::size_t n = group.order();
    if (subgroup_generator >= n) {
        throw DomainError("subgroup generator " + std::to_string(subgroup_generator) + " is outside a group of order " +
                          std::to_string(n));
    }
    ZakPlan plan{group, subgroup_generator, {}, {}, {}, std::vector<std::size_t>(n, n), std::vector<std::size_t>(n), ComplexMatrix()};
    std::size_t x = 0;
    do {
        plan.powers.push_back(x);
        x = group.mul(x, subgroup_generator);
    } while (x != 0);
    plan.subgroup = plan.powers;
    std::sort(plan.subgroup.begin(), plan.subgroup.end());

    for (std::size_t g = 0; g < n; ++g) {
        if (plan.coset_of[g] != n) continue;
        const std::size_t c = plan.section.size();
        plan.section.push_back(g);
        for (std::size_t m = 0; m < plan.powers.size(); ++m) {
            const std::size_t y = group.mul(plan.powers[m], g);
            plan.coset_of[y] = c;
            plan.power_of[y] = m;
        }
    }

    const std::size_t q = plan.q();
    plan.characters = ComplexMatrix(q, q);
    for (std::size_t k = 0; k < q; ++k)
        for (std::size_t m = 0; m < q; ++m) plan.characters(k, m) = unit_root(k * m, q);
    return plan;
}

MeasureModel character_measure(const ZakPlan& plan) {
    std::vector<std::string> ids;
    for (std::size_t k = 0; k < plan.q(); ++k) ids.push_back("alpha" + std::to_string(k));
    return MeasureModel(std::move(ids), std::vector<double>(plan.q(), 1.0 / static_cast<double>(plan.q())));
}

FiberedFunction zak_forward(const ZakPlan& plan, const GroupSignal& f) {
    require_signal(plan, f, "zak_forward");
    const std::size_t q = plan.q();
    const std::size_t p = plan.p();
    std::vector<CVector> out(q, CVector(p));
    for (std::size_t k = 0; k < q; ++k)
        for (std::size_t c = 0; c < p; ++c) {
            Complex acc = 0.0;
            for (std::size_t m = 0; m < q; ++m)
                acc += f[plan.group.mul(plan.powers[m], plan.section[c])] * std::conj(plan.characters(k, m));
            out[k][c] = acc;
        }
    return FiberedFunction(p, std::move(out));
}

GroupSignal zak_inverse(const ZakPlan& plan, const FiberedFunction& zf) {
    const std::size_t q = plan.q();
    const std::size_t p = plan.p();
    if (zf.atoms() != q || zf.fiber_dim() != p) {
        throw ShapeError("zak_inverse: expected " + std::to_string(q) + " atoms in C^" + std::to_string(p) + ", got " +
                         std::to_string(zf.atoms()) + " in C^" + std::to_string(zf.fiber_dim()));
    }
    GroupSignal f(plan.group.order());
    for (std::size_t c = 0; c < p; ++c)
        for (std::size_t m = 0; m < q; ++m) {
            Complex acc = 0.0;
            for (std::size_t k = 0; k < q; ++k) acc += zf.at(k)[c] * plan.characters(k, m);
            f[plan.group.mul(plan.powers[m], plan.section[c])] = acc / static_cast<double>(q);
        }
    return f;
}

bool in_subgroup(const ZakPlan& plan, std::size_t element) {
    return std::binary_search(plan.subgroup.begin(), plan.subgroup.end(), element);
}

GroupSignal translate(const ZakPlan& plan, const GroupSignal& f, std::size_t gamma) {
    require_signal(plan, f, "translate");
    require_gamma(plan, gamma, "translate");
    const std::size_t inv = plan.group.inverse(gamma);
    GroupSignal out(f.size());
    for (std::size_t g = 0; g < f.size(); ++g) out[g] = f[plan.group.mul(inv, g)];
    return out;
}

std::vector<Complex> multiplier(const ZakPlan& plan, std::size_t gamma) {
    require_gamma(plan, gamma, "multiplier");
    const std::size_t m = plan.power_of[gamma];
    std::vector<Complex> out(plan.q());
    for (std::size_t k = 0; k < plan.q(); ++k) out[k] = std::conj(plan.characters(k, m));
    return out;
}

FiberedSystem tg_to_mg(const ZakPlan& plan, const std::vector<GroupSignal>& generators) {
    if (generators.empty()) throw DomainError("tg_to_mg: need at least one generator");
    std::vector<FiberedFunction> z;
    z.reserve(generators.size());
    for (const auto& g : generators) z.push_back(zak_forward(plan, g));
    std::vector<FiberSystem> fibers;
    for (std::size_t k = 0; k < plan.q(); ++k) {
        std::vector<CVector> vecs;
        for (const auto& zi : z) vecs.push_back(zi.at(k));
        fibers.emplace_back(plan.p(), vecs);
    }
    return FiberedSystem(character_measure(plan), plan.p(), std::move(fibers));
}

std::vector<GroupSignal> mg_to_tg(const ZakPlan& plan, const FiberedSystem& system) {
    std::vector<GroupSignal> out;
    for (std::size_t i = 0; i < system.count(); ++i) out.push_back(zak_inverse(plan, system.generator(i)));
    return out;
}

double verify_intertwine(const ZakPlan& plan, const GroupSignal& f, std::size_t gamma) {
    const FiberedFunction lhs = zak_forward(plan, translate(plan, f, gamma));
    const FiberedFunction zf = zak_forward(plan, f);
    const std::vector<Complex> phi = multiplier(plan, gamma);
    double worst = 0.0;
    for (std::size_t k = 0; k < plan.q(); ++k)
        for (std::size_t c = 0; c < plan.p(); ++c) worst = std::max(worst, std::abs(lhs.at(k)[c] - phi[k] * zf.at(k)[c]));
    return worst;
}

GroupSignal named_signal(const ZakPlan& plan, const std::string& name) {
    const std::size_t n = plan.group.order();
    if (name == "ones") return GroupSignal(n, Complex(1.0, 0.0));
    if (name.rfind("delta", 0) == 0) {
        const std::size_t g = parse_count(name.substr(5), "signal");
        if (g >= n) throw DomainError("signal '" + name + "' is outside a group of order " + std::to_string(n));
        GroupSignal f(n);
        f[g] = 1.0;
        return f;
    }
    throw DomainError("unknown signal '" + name + "' (expected delta<g> or ones)");
}

} // namespace framekit
