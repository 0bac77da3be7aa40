#include <doctest.h>

#include <algorithm>
#include <random>

#include "crystalforms/crystal.hpp"
#include "crystalforms/multigraph.hpp"

using namespace crystalforms;

namespace {

// Independent shortest-path oracle: enumerate all edge paths up to the
// given length.
std::optional<int> path_enumeration_distance(const MultiGraph& g, int x, int y, int max_len) {
    if (x == y) return 0;
    std::vector<int> frontier{x};
    std::vector<char> seen(g.num_vertices, 0);
    seen[x] = 1;
    for (int len = 1; len <= max_len; ++len) {
        std::vector<int> next;
        for (int v : frontier)
            for (int e = 0; e < g.num_edges(); ++e) {
                if (g.origin[e] != v) continue;
                int w = g.target[e];
                if (w == y) return len;
                if (!seen[w]) {
                    seen[w] = 1;
                    next.push_back(w);
                }
            }
        frontier = std::move(next);
    }
    return std::nullopt;
}

}  // namespace

TEST_CASE("incidence and inversion structure is validated") {
    MultiGraph g;
    g.num_vertices = 2;
    g.add_edge_pair(0, 1);
    g.finalize();
    for (int e = 0; e < g.num_edges(); ++e) {
        CHECK(g.origin[g.inverse[e]] == g.target[e]);
        CHECK(g.target[g.inverse[e]] == g.origin[e]);
    }

    MultiGraph bad;
    bad.num_vertices = 2;
    bad.origin = {0, 1};
    bad.target = {1, 0};
    bad.inverse = {0, 1};  // not exchanging endpoints
    CHECK_THROWS_AS(bad.finalize(), InputError);

    MultiGraph loop;
    loop.num_vertices = 1;
    loop.add_self_inverse_loop(0);
    loop.strictly_symmetric = true;
    CHECK_THROWS_AS(loop.finalize(), InputError);
}

TEST_CASE("graph distance") {
    MultiGraph two;
    two.num_vertices = 2;
    two.add_edge_pair(0, 1);
    two.finalize();
    CHECK(graph_distance(two, 0, 0) == 0);
    CHECK(graph_distance(two, 0, 1) == 1);
    CHECK_THROWS_AS(graph_distance(two, 0, 5), InputError);

    MultiGraph c4 = cycle_graph(4);
    CHECK(graph_distance(c4, 0, 2) == path_enumeration_distance(c4, 0, 2, 4));
    CHECK(graph_distance(c4, 0, 2) == 2);

    MultiGraph disconnected;
    disconnected.num_vertices = 3;
    disconnected.add_edge_pair(0, 1);
    disconnected.finalize();
    CHECK(!graph_distance(disconnected, 0, 2).has_value());
}

TEST_CASE("distance satisfies the triangle inequality") {
    std::mt19937_64 rng(7);
    MultiGraph g;
    g.num_vertices = 8;
    for (int i = 0; i + 1 < 8; ++i) g.add_edge_pair(i, i + 1);
    g.add_edge_pair(0, 5);
    g.add_edge_pair(2, 7);
    g.finalize();
    for (int trial = 0; trial < 200; ++trial) {
        int a = rng() % 8, b = rng() % 8, c = rng() % 8;
        auto ab = graph_distance(g, a, b), bc = graph_distance(g, b, c), ac = graph_distance(g, a, c);
        REQUIRE(ab);
        REQUIRE(bc);
        REQUIRE(ac);
        CHECK(*ac <= *ab + *bc);
    }
}

TEST_CASE("connectivity") {
    MultiGraph one;
    one.num_vertices = 1;
    one.finalize();
    CHECK(is_connected(one));

    MultiGraph two;
    two.num_vertices = 2;
    two.finalize();
    CHECK(!is_connected(two));

    CHECK(is_connected(builtin_lattice("hexagonal").seed));
}

TEST_CASE("quotient by the trivial group is the identity") {
    MultiGraph g = cycle_graph(4);
    auto q = quotient_by_action(g, {});
    CHECK(q.quotient.num_vertices == g.num_vertices);
    CHECK(q.quotient.num_edges() == g.num_edges());
    CHECK(is_covering(quotient_projection(g, q)));
}

TEST_CASE("line quotient: translations collapse the torus circle to a single vertex") {
    auto lat = builtin_lattice("euclidean", {1});
    auto torus = torus_realization(lat, {6});
    GraphMorphism gen;
    gen.dom = &torus.graph;
    gen.cod = &torus.graph;
    gen.vertex_map = torus.gen_vertex_maps[0];
    gen.edge_map = torus.gen_edge_maps[0];
    auto q = quotient_by_action(torus.graph, {gen});
    CHECK(q.quotient.num_vertices == 1);
    CHECK(q.quotient.num_edges() == 2);  // one edge orbit pair
    CHECK(is_covering(quotient_projection(torus.graph, q)));
}

TEST_CASE("hexagonal torus quotient recovers the seed crystal") {
    auto lat = builtin_lattice("hexagonal");
    auto torus = torus_realization(lat, {3, 3});
    std::vector<GraphMorphism> gens(2);
    for (int j = 0; j < 2; ++j) {
        gens[j].dom = &torus.graph;
        gens[j].cod = &torus.graph;
        gens[j].vertex_map = torus.gen_vertex_maps[j];
        gens[j].edge_map = torus.gen_edge_maps[j];
    }
    auto q = quotient_by_action(torus.graph, gens);
    CHECK(q.quotient.num_vertices == 2);
    CHECK(q.quotient.num_edges() == 6);
    CHECK(is_covering(quotient_projection(torus.graph, q)));
}

TEST_CASE("free actions in the suite produce coverings") {
    // Antipodal fold of the 4-cycle onto the doubled 2-cycle.
    MultiGraph c4 = cycle_graph(4);
    GraphMorphism antipodal;
    antipodal.dom = &c4;
    antipodal.cod = &c4;
    antipodal.vertex_map = {2, 3, 0, 1};
    antipodal.edge_map.resize(c4.num_edges());
    for (int k = 0; k < 4; ++k) {
        antipodal.edge_map[2 * k] = 2 * ((k + 2) % 4);
        antipodal.edge_map[2 * k + 1] = 2 * ((k + 2) % 4) + 1;
    }
    auto q = quotient_by_action(c4, {antipodal});
    CHECK(q.quotient.num_vertices == 2);
    CHECK(q.quotient.num_edges() == 4);
    CHECK(is_covering(quotient_projection(c4, q)));
}

TEST_CASE("collapsing vertices of distinct degree is not a covering") {
    MultiGraph p3 = path_graph(3);
    MultiGraph p2 = path_graph(2);
    GraphMorphism fold;
    fold.dom = &p3;
    fold.cod = &p2;
    fold.vertex_map = {0, 1, 0};
    // P3 edges: 0:(0->1) 1:(1->0) 2:(1->2) 3:(2->1); P2 edges: 0:(0->1) 1:(1->0).
    fold.edge_map = {0, 1, 1, 0};
    fold.validate();
    CHECK(!is_covering(fold));

    GraphMorphism identity;
    identity.dom = &p3;
    identity.cod = &p3;
    identity.vertex_map = {0, 1, 2};
    identity.edge_map = {0, 1, 2, 3};
    CHECK(is_covering(identity));
}

TEST_CASE("non-automorphism generators are rejected") {
    MultiGraph c4 = cycle_graph(4);
    GraphMorphism collapse;
    collapse.dom = &c4;
    collapse.cod = &c4;
    collapse.vertex_map = {0, 1, 0, 1};
    collapse.edge_map = {0, 1, 2, 3, 0, 1, 2, 3};
    CHECK_THROWS_AS(quotient_by_action(c4, {collapse}), InputError);
}
