#include "crystalforms/fixtures.hpp"

namespace crystalforms::fixtures {

Rat random_rat(std::mt19937_64& rng, int num_range, int den_range) {
    long num = static_cast<long>(rng() % (2 * num_range + 1)) - num_range;
    long den = 1 + static_cast<long>(rng() % den_range);
    return rat(num, den);
}

ConservedQuantity random_conserved(const System& sys, std::mt19937_64& rng) {
    ConservedQuantity out{RatVec(sys.num_states(), Rat(0))};
    for (const auto& b : sys.basis) {
        Rat coeff = random_rat(rng);
        for (int s = 0; s < sys.num_states(); ++s) out.values[s] += coeff * b(s);
    }
    return out;
}

UniformFunction random_invariant_uniform(const System& sys, int radius, std::mt19937_64& rng,
                                         int max_support) {
    UniformFunction f;
    f.shift_invariant = true;
    f.block_metric = true;
    f.radius = radius;
    for (const auto& support : anchored_supports(sys.lattice, radius, max_support)) {
        LocalFunction term;
        term.support = support;
        term.vanishing = true;
        std::vector<int> non_base;
        for (int s = 0; s < sys.num_states(); ++s)
            if (s != sys.base()) non_base.push_back(s);
        std::vector<std::size_t> digit(support.size(), 0);
        while (true) {
            std::vector<int> states(support.size());
            for (std::size_t i = 0; i < support.size(); ++i) states[i] = non_base[digit[i]];
            Rat v = random_rat(rng);
            if (v != 0) term.table.emplace(states, v);
            std::size_t i = 0;
            for (; i < digit.size(); ++i) {
                if (++digit[i] < non_base.size()) break;
                digit[i] = 0;
            }
            if (i == digit.size()) break;
        }
        if (!term.table.empty()) f.terms.push_back(std::move(term));
    }
    return f;
}

RoundTripFixture round_trip_fixture(const System& sys, int radius, std::mt19937_64& rng) {
    RoundTripFixture fx;
    fx.g0 = random_invariant_uniform(sys, radius, rng);
    auto omega = std::make_shared<FormSum>();
    omega->add(Rat(1), std::make_shared<DifferentialForm>(differential(sys, fx.g0)));
    for (int j = 0; j < sys.lattice.rank; ++j) {
        ConservedQuantity zeta = random_conserved(sys, rng);
        AFunction a = a_function(sys, zeta, j);
        omega->add(Rat(1), std::make_shared<DifferentialForm>(sys, a.evaluator(sys.base()), 1));
        fx.zetas.push_back(std::move(zeta));
    }
    fx.omega = omega;
    return fx;
}

}  // namespace crystalforms::fixtures
