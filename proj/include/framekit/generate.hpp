#pragma once

// Seeded random instance pairs (A, B) of fibered systems.

#include <cstdint>
#include <string>

#include "framekit/mispace.hpp"

namespace framekit {

enum class Family {
    in_duality,          ///< every fiber angle has cosine >= delta
    orthogonal_failure,  ///< one atom has a principal direction with cosine 0
    near_threshold,      ///< one atom has a principal cosine equal to epsilon
};

Family parse_family(const std::string& name);
std::string family_name(Family f);

struct GenParams {
    Family family = Family::in_duality;
    std::size_t atoms = 4;
    std::size_t dim = 4;
    std::size_t gens = 3;  ///< maximum generator count per system
    double delta = 0.1;
    double epsilon = 1e-6;
    std::uint64_t seed = 1;
    /// Every fiber of A and B is a basis of a min(dim, gens)-dimensional span.
    bool riesz = false;
};

struct InstancePair {
    FiberedSystem a;
    FiberedSystem b;
    std::size_t special_atom;  ///< the failing / near-threshold atom (0 for in_duality)
};

/// Throws DomainError on zero sizes, delta outside (0, 1], epsilon outside
/// [0, 1), or a failure family with dim < 2.
InstancePair generate_pair(const GenParams& p);

} // namespace framekit
