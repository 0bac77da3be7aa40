#pragma once

#include <memory>
#include <random>

#include "crystalforms/decomposition.hpp"

namespace crystalforms::fixtures {

Rat random_rat(std::mt19937_64& rng, int num_range = 9, int den_range = 4);

// Random rational element of Consv(S).
ConservedQuantity random_conserved(const System& sys, std::mt19937_64& rng);

// Random shift-invariant uniform function with anchored supports of block
// diameter <= radius (at most max_support sites each).
UniformFunction random_invariant_uniform(const System& sys, int radius, std::mt19937_64& rng,
                                         int max_support = 2);

// omega = del g0 + sum_j del A^j_{zeta_j}, with everything retained for
// round-trip comparisons.
struct RoundTripFixture {
    UniformFunction g0;
    std::vector<ConservedQuantity> zetas;
    std::shared_ptr<const FormSum> omega;
};

RoundTripFixture round_trip_fixture(const System& sys, int radius, std::mt19937_64& rng);

}  // namespace crystalforms::fixtures
