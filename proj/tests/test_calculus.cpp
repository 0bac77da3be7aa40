#include <doctest.h>

#include <random>
#include <set>

#include "crystalforms/calculus.hpp"
#include "crystalforms/fixtures.hpp"

using namespace crystalforms;

namespace {

Configuration cfg(const std::vector<std::pair<LatticeVertex, int>>& raw) {
    return Configuration::of(raw, 0);
}

LatticeVertex at1(int x) { return {0, {x}}; }
LatticeVertex at2(int x, int y) { return {0, {x, y}}; }

System exclusion_system_1d() { return System(builtin_lattice("euclidean", {1}), exclusion_interaction()); }
System exclusion_system_2d() { return System(builtin_lattice("euclidean", {2}), exclusion_interaction()); }

}  // namespace

TEST_CASE("conserved field evaluation") {
    auto sys = exclusion_system_2d();
    UniformFunction xi_field = conserved_field(sys, sys.basis[0]);
    CHECK(xi_field.evaluate(Configuration{}, 0) == 0);
    CHECK(xi_field.evaluate(cfg({{at2(0, 0), 1}, {at2(3, -2), 1}}), 0) == 2);

    // A single-site local term vanishes when the site is at base state.
    LocalFunction term;
    term.support = {at2(0, 0)};
    term.table[{1}] = Rat(5);
    CHECK(term.eval(cfg({{at2(1, 0), 1}}), 0) == 0);
    CHECK(term.eval(cfg({{at2(0, 0), 1}}), 0) == 5);
}

TEST_CASE("expansion: additive functions have only singleton pieces") {
    auto sys = exclusion_system_1d();
    auto xi_eval = conserved_field(sys, sys.basis[0]).evaluator(0);
    std::vector<LatticeVertex> window{at1(0), at1(1)};
    auto pieces = expand_function(xi_eval, window, 2, 0, 1 << 20);
    REQUIRE(pieces.size() == 2);
    for (const auto& p : pieces) {
        CHECK(p.support.size() == 1);
        CHECK(p.table.at({1}) == 1);
    }

    // The zero function has no pieces.
    CHECK(expand_function([](const Configuration&) { return Rat(0); }, window, 2, 0, 1 << 20).empty());

    // A product couples exactly the pair.
    auto product = [&](const Configuration& eta) -> Rat {
        return Rat(eta.state_at(at1(0), 0)) * Rat(eta.state_at(at1(1), 0));
    };
    auto prod_pieces = expand_function(product, window, 2, 0, 1 << 20);
    REQUIRE(prod_pieces.size() == 1);
    CHECK(prod_pieces[0].support.size() == 2);
    CHECK(prod_pieces[0].table.at({1, 1}) == 1);
}

TEST_CASE("expansion reconstructs and is unique") {
    auto sys = System(builtin_lattice("euclidean", {1}), two_species_exclusion());
    std::vector<LatticeVertex> window{at1(0), at1(1), at1(2)};
    std::mt19937_64 rng(23);
    for (int trial = 0; trial < 20; ++trial) {
        // A random function given by a full table on S^window.
        std::map<std::vector<int>, Rat> table;
        std::vector<int> states(3, 0);
        while (true) {
            table[states] = fixtures::random_rat(rng);
            int i = 0;
            for (; i < 3; ++i) {
                if (++states[i] < 3) break;
                states[i] = 0;
            }
            if (i == 3) break;
        }
        auto f = [&](const Configuration& eta) -> Rat {
            std::vector<int> key;
            for (const auto& v : window) key.push_back(eta.state_at(v, 0));
            return table.at(key);
        };
        auto pieces = expand_function(f, window, 3, 0, 1 << 20);
        // Reconstruction is exact on every configuration.
        for (const auto& [states2, unused] : table) {
            std::vector<std::pair<LatticeVertex, int>> raw;
            for (int i = 0; i < 3; ++i) raw.emplace_back(window[i], states2[i]);
            Configuration eta = Configuration::of(raw, 0);
            Rat sum(0);
            for (const auto& p : pieces) sum += p.eval(eta, 0);
            CHECK(sum == f(eta));
        }
        // Re-expanding the reconstruction returns identical pieces.
        auto again = expand_function(
            [&](const Configuration& eta) -> Rat {
                Rat sum(0);
                for (const auto& p : pieces) sum += p.eval(eta, 0);
                return sum;
            },
            window, 3, 0, 1 << 20);
        REQUIRE(pieces.size() == again.size());
        for (std::size_t i = 0; i < pieces.size(); ++i) {
            CHECK(pieces[i].support == again[i].support);
            CHECK(pieces[i].table == again[i].table);
        }
    }
}

TEST_CASE("iota restriction") {
    auto sys = exclusion_system_1d();
    auto xi_eval = conserved_field(sys, sys.basis[0]).evaluator(0);
    Configuration eta = cfg({{at1(0), 1}, {at1(2), 1}});
    CHECK(iota_restrict(xi_eval, {}, eta) == 0);                  // iota^empty = f(star)
    CHECK(iota_restrict(xi_eval, {at1(0)}, eta) == 1);            // xi on the restriction
    CHECK(iota_restrict(xi_eval, {at1(0), at1(1), at1(2)}, eta) == 2);
}

TEST_CASE("differential of a conserved field vanishes") {
    auto sys = exclusion_system_2d();
    auto form = differential(sys, conserved_field(sys, sys.basis[0]));
    std::mt19937_64 rng(3);
    for (int trial = 0; trial < 50; ++trial) {
        Configuration eta = cfg({{at2(static_cast<int>(rng() % 3), static_cast<int>(rng() % 3)), 1}});
        LatticeEdge e{static_cast<int>(rng() % 4), {static_cast<int>(rng() % 3), static_cast<int>(rng() % 3)}};
        CHECK(form(eta, e) == 0);
    }
}

TEST_CASE("differential values and the alternating condition") {
    auto sys = exclusion_system_1d();
    // f(eta) = xi(eta_0): the 0-indicator at cell 0.
    auto f = [](const Configuration& eta) -> Rat { return Rat(eta.state_at({0, {0}}, 0)); };
    DifferentialForm form(sys, f, 1);

    Configuration eta = cfg({{at1(0), 1}});
    LatticeEdge right{0, {0}};  // 0 -> 1
    CHECK(form(eta, right) == -1);  // the particle leaves cell 0
    Configuration hole = cfg({{at1(1), 1}});
    LatticeEdge left = edge_inverse(sys.lattice, right);
    CHECK(form(hole, left) == 1);

    // Alternating scan over random transitions.
    std::mt19937_64 rng(9);
    for (int trial = 0; trial < 100; ++trial) {
        std::set<int> used;
        while (used.size() < 2) used.insert(static_cast<int>(rng() % 5) - 2);
        std::vector<std::pair<LatticeVertex, int>> raw;
        for (int x0 : used) raw.emplace_back(at1(x0), 1);
        Configuration x = Configuration::of(raw, 0);
        LatticeEdge e{static_cast<int>(rng() % 2), {static_cast<int>(rng() % 5) - 2}};
        Configuration moved = apply_edge(sys.lattice, sys.interaction, x, e);
        if (moved == x) {
            CHECK(form(x, e) == 0);
        } else {
            CHECK(form(x, e) == -form(moved, edge_inverse(sys.lattice, e)));
        }
    }
}

TEST_CASE("path integrals telescope for differentials") {
    auto sys = exclusion_system_2d();
    ChargeContext& ctx = sys.charges;
    auto w = make_window(sys.lattice, {{{-3, 3}, {-3, 3}}});
    Normalizer norm(w, sys.interaction, ctx);

    std::mt19937_64 grng(77);
    UniformFunction g = fixtures::random_invariant_uniform(sys, 1, grng);
    auto form = std::make_shared<DifferentialForm>(differential(sys, g));

    CHECK(integrate(*form, {}, sys) == 0);

    std::mt19937_64 rng(13);
    for (int trial = 0; trial < 8; ++trial) {
        std::set<std::pair<int, int>> used;
        while (used.size() < 2)
            used.insert({static_cast<int>(rng() % 5) - 2, static_cast<int>(rng() % 5) - 2});
        std::vector<std::pair<LatticeVertex, int>> raw;
        for (auto [x, y] : used) raw.emplace_back(at2(x, y), 1);
        Configuration eta = Configuration::of(raw, 0);
        auto path = norm.normalize_path(eta);
        Rat integral = integrate(*form, path, sys);
        Rat expected = g.evaluate(norm.representative(charge_of(ctx, eta)), 0) - g.evaluate(eta, 0);
        CHECK(integral == expected);

        // A path followed by its reverse integrates to zero.
        std::vector<Transition> loop = path;
        for (auto it = path.rbegin(); it != path.rend(); ++it)
            loop.push_back(invert_transition(sys.lattice, sys.interaction, *it));
        CHECK(integrate(*form, loop, sys) == 0);
    }
}

TEST_CASE("potential of the zero form is zero") {
    auto sys = exclusion_system_1d();
    auto w = make_window(sys.lattice, {{{-4, 4}}});
    OrbitDataForm zero(sys, 1, std::vector<std::map<Configuration, Rat>>(sys.lattice.seed.num_edges()));
    Potential f(sys, w, zero);
    CHECK(f(Configuration{}) == 0);
    CHECK(f(cfg({{at1(2), 1}})) == 0);
    CHECK(f(cfg({{at1(-1), 1}, {at1(3), 1}})) == 0);
}

TEST_CASE("potential recovers a known primitive up to component constants") {
    auto sys = exclusion_system_2d();
    auto w = make_window(sys.lattice, {{{-3, 3}, {-3, 3}}});
    std::mt19937_64 rng(31);
    UniformFunction g = fixtures::random_invariant_uniform(sys, 1, rng);
    auto form = differential(sys, g);
    Potential f(sys, w, form);
    Normalizer norm(w, sys.interaction, sys.charges);

    for (int trial = 0; trial < 6; ++trial) {
        int particles = 1 + static_cast<int>(rng() % 3);
        std::set<std::pair<int, int>> used;
        while (static_cast<int>(used.size()) < particles)
            used.insert({static_cast<int>(rng() % 5) - 2, static_cast<int>(rng() % 5) - 2});
        std::vector<std::pair<LatticeVertex, int>> raw;
        for (auto [x, y] : used) raw.emplace_back(at2(x, y), 1);
        Configuration eta = Configuration::of(raw, 0);
        Configuration rep = norm.representative(charge_of(sys.charges, eta));
        CHECK(f(eta) == g.evaluate(eta, 0) - g.evaluate(rep, 0));
    }
}

namespace {

// A deliberately non-closed alternating form: horizontal displacement
// weighted by the row of the moved pair.
class TwistedForm final : public Form {
  public:
    explicit TwistedForm(const System& sys) : sys_(&sys) {}
    Rat operator()(const Configuration& eta, const LatticeEdge& e) const override {
        Configuration moved = apply_edge(sys_->lattice, sys_->interaction, eta, e);
        if (moved == eta) return Rat(0);
        Cell from = edge_origin(sys_->lattice, e).cell;
        Cell to = edge_target(sys_->lattice, e).cell;
        int dx = to[0] - from[0];
        return Rat(dx) * Rat(from[1]);
    }
    int radius() const override { return 1; }

  private:
    const System* sys_;
};

}  // namespace

TEST_CASE("closedness violations are reported with a cycle") {
    auto sys = exclusion_system_2d();
    auto w = make_window(sys.lattice, {{{-2, 2}, {-2, 2}}});
    TwistedForm omega(sys);
    Potential f(sys, w, omega);

    // Transitions around a plaquette catch the violation.
    std::vector<Transition> transitions;
    for (int e = 0; e < 4; ++e)
        for (int x = -1; x <= 1; ++x)
            for (int y = -1; y <= 1; ++y)
                transitions.push_back({cfg({{at2(x, y), 1}}), LatticeEdge{e, {x, y}}});
    auto witness = check_potential_consistency(sys, f, omega, transitions);
    REQUIRE(witness.has_value());
    CHECK(witness->residual != 0);
    // The cycle closes up.
    REQUIRE(!witness->cycle.empty());
    Configuration cur = witness->cycle.front().config;
    for (const auto& t : witness->cycle) {
        CHECK(t.config == cur);
        cur = apply_edge(sys.lattice, sys.interaction, cur, t.edge);
    }
    CHECK(cur == witness->cycle.front().config);

    // A differential form passes the same scan.
    std::mt19937_64 rng(41);
    UniformFunction g = fixtures::random_invariant_uniform(sys, 1, rng);
    auto exact = differential(sys, g);
    Potential fg(sys, w, exact);
    CHECK(!check_potential_consistency(sys, fg, exact, transitions).has_value());
}

TEST_CASE("shift invariance checks") {
    auto sys = exclusion_system_2d();
    auto w = make_window(sys.lattice, {{{-3, 3}, {-3, 3}}});
    std::mt19937_64 rng(51);
    std::vector<Transition> samples;
    for (int trial = 0; trial < 20; ++trial) {
        Configuration eta = cfg({{at2(static_cast<int>(rng() % 3) - 1, static_cast<int>(rng() % 3) - 1), 1}});
        samples.push_back({eta, LatticeEdge{static_cast<int>(rng() % 4), {0, 0}}});
    }

    UniformFunction g = fixtures::random_invariant_uniform(sys, 1, rng);
    auto invariant_form = differential(sys, g);
    CHECK(is_shift_invariant(invariant_form, sys, samples).invariant);

    OrbitDataForm zero(sys, 1, std::vector<std::map<Configuration, Rat>>(4));
    CHECK(is_shift_invariant(zero, sys, samples).invariant);

    // xi pinned at a single site is not shift-invariant.
    auto pinned = [](const Configuration& eta) -> Rat { return Rat(eta.state_at({0, {0, 0}}, 0)); };
    DifferentialForm broken(sys, pinned, 1);
    CHECK(!is_shift_invariant(broken, sys, samples).invariant);
}

TEST_CASE("orbit data forms evaluate by translation") {
    auto sys = exclusion_system_1d();
    // omega_e = 1 exactly when a particle hops right into an empty site.
    // Radius-1 tables list every ball pattern with that restriction.
    std::vector<std::map<Configuration, Rat>> entries(2);
    entries[0][cfg({{at1(0), 1}})] = Rat(1);
    entries[0][cfg({{at1(-1), 1}, {at1(0), 1}})] = Rat(1);
    entries[1][cfg({{at1(0), 1}})] = Rat(-1);
    entries[1][cfg({{at1(0), 1}, {at1(1), 1}})] = Rat(-1);
    OrbitDataForm omega(sys, 1, entries);
    omega.validate_alternating(1 << 20);

    Configuration eta = cfg({{at1(5), 1}});
    CHECK(omega(eta, LatticeEdge{0, {5}}) == 1);
    CHECK(omega(eta, LatticeEdge{0, {0}}) == 0);
    Configuration moved = apply_edge(sys.lattice, sys.interaction, eta, LatticeEdge{0, {5}});
    CHECK(omega(moved, edge_inverse(sys.lattice, LatticeEdge{0, {5}})) == -1);

    // Breaking the pairing fails the alternating scan.
    entries[1].clear();
    OrbitDataForm broken(sys, 1, entries);
    CHECK_THROWS_AS(broken.validate_alternating(1 << 20), InputError);
    // So does a nonzero value on a fixed transition.
    entries[1][cfg({{at1(0), 1}})] = Rat(-1);
    entries[1][cfg({{at1(0), 1}, {at1(1), 1}})] = Rat(-1);
    entries[0][cfg({{at1(0), 1}, {at1(1), 1}})] = Rat(7);
    OrbitDataForm fixed_nonzero(sys, 1, entries);
    CHECK_THROWS_AS(fixed_nonzero.validate_alternating(1 << 20), InputError);
}
