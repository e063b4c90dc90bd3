#include "framekit/generate.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

#include "framekit/error.hpp"

namespace framekit {

namespace {

class Sampler {
public:
    explicit Sampler(std::uint64_t seed) : rng_(seed) {}

    std::size_t index(std::size_t lo, std::size_t hi) { return std::uniform_int_distribution<std::size_t>(lo, hi)(rng_); }
    double real(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng_); }

    ComplexMatrix gaussian(std::size_t rows, std::size_t cols) {
        ComplexMatrix m(rows, cols);
        for (std::size_t i = 0; i < rows; ++i)
            for (std::size_t j = 0; j < cols; ++j) {
                const double re = normal_(rng_);
                const double im = normal_(rng_);
                m(i, j) = {re, im};
            }
        return m;
    }

    ComplexMatrix unitary(std::size_t n) { return svd(gaussian(n, n)).u; }

    // k x m with orthonormal rows scaled by singular values in [0.5, 2].
    ComplexMatrix coefficients(std::size_t k, std::size_t m) {
        const ComplexMatrix left = unitary(k);
        const ComplexMatrix right = unitary(m).columns(0, k).adjoint();
        std::vector<double> s(k);
        for (auto& x : s) x = real(0.5, 2.0);
        return left * ComplexMatrix::diagonal(s) * right;
    }

private:
    std::mt19937_64 rng_;
    std::normal_distribution<double> normal_{0.0, 1.0};
};

// Orthonormal bases of J_A and J_B in C^d with principal cosines cos(theta_j):
// column j of J_B is cos(theta_j) q_j + sin(theta_j) p_j, p_j orthogonal to J_A.
// Columns without a partner p_j keep theta_j = 0.
struct FiberPair {
    ComplexMatrix ja;
    ComplexMatrix jb;
};

FiberPair rotated_pair(Sampler& s, std::size_t d, std::size_t k, const std::vector<double>& cosines) {
    const ComplexMatrix u = s.unitary(d);
    ComplexMatrix ja = u.columns(0, k);
    ComplexMatrix jb = ja;
    for (std::size_t j = 0; j < k; ++j) {
        if (k + j >= d) break;
        const double c = cosines[j];
        const double sn = std::sqrt(std::max(0.0, 1.0 - c * c));
        for (std::size_t i = 0; i < d; ++i) jb(i, j) = c * u(i, j) + sn * u(i, k + j);
    }
    return {std::move(ja), std::move(jb)};
}

} // namespace

Family parse_family(const std::string& name) {
    if (name == "in-duality") return Family::in_duality;
    if (name == "orthogonal-failure") return Family::orthogonal_failure;
    if (name == "near-threshold") return Family::near_threshold;
    throw DomainError("unknown instance family '" + name + "'");
}

std::string family_name(Family f) {
    switch (f) {
    case Family::in_duality: return "in-duality";
    case Family::orthogonal_failure: return "orthogonal-failure";
    case Family::near_threshold: return "near-threshold";
    }
    return "";
}

InstancePair generate_pair(const GenParams& p) {
    if (p.atoms == 0 || p.dim == 0 || p.gens == 0) throw DomainError("gen: atoms, dim and gens must be positive");
    if (!(p.delta > 0.0 && p.delta <= 1.0)) throw DomainError("gen: delta must lie in (0, 1]");
    if (!(p.epsilon >= 0.0 && p.epsilon < 1.0)) throw DomainError("gen: epsilon must lie in [0, 1)");
    if (p.family != Family::in_duality && p.dim < 2) throw DomainError("gen: failure families need dim >= 2");

    Sampler s(p.seed);
    const std::size_t d = p.dim;
    const std::size_t special = p.family == Family::in_duality ? 0 : s.index(0, p.atoms - 1);

    std::vector<std::size_t> k(p.atoms);
    for (std::size_t x = 0; x < p.atoms; ++x) {
        const std::size_t cap = x == special && p.family != Family::in_duality ? std::max<std::size_t>(1, d / 2) : d;
        k[x] = s.index(1, std::min(cap, p.gens));
        if (p.riesz) k[x] = std::min(p.dim, p.gens);
    }
    const std::size_t kmax = *std::max_element(k.begin(), k.end());
    const std::size_t m = p.riesz ? kmax : s.index(kmax, p.gens);
    const std::size_t n = p.riesz ? kmax : s.index(kmax, p.gens);

    std::vector<double> weights(p.atoms);
    for (auto& w : weights) w = s.real(0.1, 1.0);
    const MeasureModel measure(MeasureModel::uniform(p.atoms, 1.0).ids(), weights);

    std::vector<FiberSystem> fa;
    std::vector<FiberSystem> fb;
    for (std::size_t x = 0; x < p.atoms; ++x) {
        std::vector<double> cosines(k[x]);
        for (auto& c : cosines) c = s.real(p.delta, 1.0);
        if (x == special && p.family == Family::orthogonal_failure) cosines[0] = 0.0;
        if (x == special && p.family == Family::near_threshold) cosines[0] = p.epsilon;
        const FiberPair pair = rotated_pair(s, d, k[x], cosines);
        fa.emplace_back(pair.ja * s.coefficients(k[x], m));
        fb.emplace_back(pair.jb * s.coefficients(k[x], n));
    }
    return {FiberedSystem(measure, d, std::move(fa)), FiberedSystem(measure, d, std::move(fb)), special};
}

} // namespace framekit
