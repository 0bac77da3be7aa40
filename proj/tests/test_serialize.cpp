#include <doctest.h>

#include "crystalforms/fixtures.hpp"
#include "crystalforms/serialize.hpp"

using namespace crystalforms;

TEST_CASE("rational literals") {
    CHECK(rat_from_string("3/4") == Rat(3, 4));
    CHECK(rat_from_string("-6/4") == Rat(-3, 2));
    CHECK(rat_from_string("5") == Rat(5));
    CHECK(rat_to_string(Rat(-3, 2)) == "-3/2");
    CHECK(rat_to_string(Rat(7)) == "7");
    CHECK_THROWS_AS(rat_from_string("1/0"), InputError);
    CHECK_THROWS_AS(rat_from_string("a/2"), InputError);
    CHECK_THROWS_AS(rat_from_string(""), InputError);
}

TEST_CASE("graph round trip") {
    MultiGraph g = builtin_lattice("hexagonal").seed;
    Json j = graph_to_json(g);
    MultiGraph back = graph_from_json(j);
    CHECK(back.num_vertices == g.num_vertices);
    CHECK(back.origin == g.origin);
    CHECK(back.target == g.target);
    CHECK(back.inverse == g.inverse);
    CHECK(back.strictly_symmetric == g.strictly_symmetric);
}

TEST_CASE("lattice round trip") {
    for (const char* name : {"hexagonal", "triangular", "diamond"}) {
        PeriodicLattice lat = builtin_lattice(name);
        PeriodicLattice back = lattice_from_json(lattice_to_json(lat));
        CHECK(back.rank == lat.rank);
        CHECK(back.translations == lat.translations);
        CHECK(back.generator_names == lat.generator_names);
        CHECK(back.seed.origin == lat.seed.origin);
    }
    // Broken orbit data is rejected.
    Json j = lattice_to_json(builtin_lattice("euclidean", {2}));
    j["orbits"][0]["translation"] = {5, 5};
    CHECK_THROWS_AS(lattice_from_json(j), InputError);
}

TEST_CASE("interaction round trip") {
    for (const Interaction& in : {exclusion_interaction(), two_species_exclusion(), identity_interaction(3)}) {
        Interaction back = interaction_from_json(interaction_to_json(in));
        CHECK(back.state_names == in.state_names);
        CHECK(back.base == in.base);
        CHECK(back.table == in.table);
    }
    CHECK_THROWS_AS(interaction_from_json(Json{{"states", Json::array()}, {"base", "0"}, {"phi", Json::array()}}),
                    InputError);
}

TEST_CASE("configuration round trip") {
    auto in = two_species_exclusion();
    Configuration c = Configuration::of({{{0, {1, -2}}, 1}, {{0, {0, 0}}, 2}}, in.base);
    Configuration back = configuration_from_json(configuration_to_json(c, in), in, 2);
    CHECK(back == c);
}

TEST_CASE("form round trip") {
    System sys(builtin_lattice("euclidean", {1}), exclusion_interaction());
    std::vector<std::map<Configuration, Rat>> entries(2);
    entries[0][Configuration::of({{{0, {0}}, 1}}, 0)] = Rat(1, 3);
    entries[0][Configuration::of({{{0, {-1}}, 1}, {{0, {0}}, 1}}, 0)] = Rat(1, 3);
    entries[1][Configuration::of({{{0, {0}}, 1}}, 0)] = Rat(-1, 3);
    entries[1][Configuration::of({{{0, {0}}, 1}, {{0, {1}}, 1}}, 0)] = Rat(-1, 3);
    OrbitDataForm form(sys, 1, entries);
    form.validate_alternating(1 << 16);

    Json j = form_to_json(form, sys.interaction);
    OrbitDataForm back = form_from_json(j, sys);
    CHECK(back.radius() == form.radius());
    CHECK(back.entries() == form.entries());
}

TEST_CASE("uniform function serialization") {
    System sys(builtin_lattice("euclidean", {2}), exclusion_interaction());
    std::mt19937_64 rng(3);
    UniformFunction g = fixtures::random_invariant_uniform(sys, 1, rng);
    Json j = uniform_function_to_json(g, sys.interaction);
    CHECK(j["shift_invariant"] == true);
    CHECK(j["terms"].size() == g.terms.size());
}
