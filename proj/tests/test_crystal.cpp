#include <doctest.h>

#include <map>
#include <set>
#include <string>

#include "crystalforms/crystal.hpp"

using namespace crystalforms;

namespace {

// Independent block-graph distance: layered expansion over the step
// vectors, written without BlockGeometry.
std::optional<int> block_bfs_oracle(const PeriodicLattice& lat, const Cell& from, const Cell& to, int limit) {
    std::set<Cell> steps;
    for (const auto& t : lat.translations)
        if (t != Cell(lat.rank, 0)) {
            steps.insert(t);
            steps.insert(cell_neg(t));
        }
    if (from == to) return 0;
    std::set<Cell> seen{from};
    std::vector<Cell> frontier{from};
    for (int depth = 1; depth <= limit; ++depth) {
        std::vector<Cell> next;
        for (const auto& c : frontier)
            for (const auto& s : steps) {
                Cell w = cell_add(c, s);
                if (!seen.insert(w).second) continue;
                if (w == to) return depth;
                next.push_back(w);
            }
        frontier = std::move(next);
    }
    return std::nullopt;
}

// Def-style essential Euclidean oracle: block distance equals the l1
// distance on every pair of cells in a box.
bool ee_box_oracle(const PeriodicLattice& lat, int half_width) {
    CellBox box;
    for (int j = 0; j < lat.rank; ++j) box.range.push_back({-half_width, half_width});
    for (const auto& c : box.cells()) {
        int l1 = cell_l1(c);
        auto d = block_bfs_oracle(lat, Cell(lat.rank, 0), c, l1 + 3);
        if (!d || *d != l1) return false;
    }
    return true;
}

bool suffix_connected(const FiniteWindow& w) {
    const int n = w.num_vertices();
    for (int k = 0; k < n; ++k) {
        std::set<int> alive(w.canonical_order.begin() + k, w.canonical_order.end());
        // BFS inside the suffix.
        std::set<int> seen{*alive.begin()};
        std::vector<int> frontier{*alive.begin()};
        while (!frontier.empty()) {
            std::vector<int> next;
            for (int v : frontier)
                for (int e : w.graph.out_edges[v]) {
                    int t = w.graph.target[e];
                    if (!alive.count(t) || seen.count(t)) continue;
                    seen.insert(t);
                    next.push_back(t);
                }
            frontier = std::move(next);
        }
        if (seen.size() != alive.size()) return false;
    }
    return true;
}

}  // namespace

TEST_CASE("builtin lattices have the documented seeds") {
    auto e2 = builtin_lattice("euclidean", {2});
    CHECK(e2.seed.num_vertices == 1);
    CHECK(e2.seed.num_edges() == 4);
    std::set<Cell> trans(e2.translations.begin(), e2.translations.end());
    CHECK(trans == std::set<Cell>{{1, 0}, {-1, 0}, {0, 1}, {0, -1}});

    auto hex = builtin_lattice("hexagonal");
    CHECK(hex.seed.num_vertices == 2);
    CHECK(hex.seed.num_edges() == 6);
    CHECK(is_connected(hex.seed));

    auto nn = builtin_lattice("euclidean_nearest_n", {2, 2});
    CHECK(nn.seed.num_vertices == 1);
    std::set<Cell> expect;
    for (int a = -2; a <= 2; ++a)
        for (int b = -2; b <= 2; ++b) {
            Cell v{a, b};
            int l1 = cell_l1(v);
            if (l1 > 0 && l1 <= 2) expect.insert(v);
        }
    std::set<Cell> got(nn.translations.begin(), nn.translations.end());
    CHECK(got == expect);

    CHECK_THROWS_AS(builtin_lattice("nosuch"), InputError);
    CHECK_THROWS_AS(builtin_lattice("euclidean", {0}), InputError);
}

TEST_CASE("maximal abelian cover") {
    // Hexagonal seed: rank 1 - 2 + 3 = 2.
    auto hex_seed = builtin_lattice("hexagonal").seed;
    auto cover = maximal_abelian_cover(hex_seed);
    CHECK(cover.rank == 2);
    CHECK(is_essentially_euclidean(cover).ee_at_stored_coordinate);
    CHECK(is_essentially_euclidean(cover).rank_certified);

    // Single vertex with one loop pair: the line.
    MultiGraph loop;
    loop.num_vertices = 1;
    loop.strictly_symmetric = true;
    loop.add_edge_pair(0, 0);
    loop.finalize();
    auto line = maximal_abelian_cover(loop);
    CHECK(line.rank == 1);
    std::set<Cell> trans(line.translations.begin(), line.translations.end());
    CHECK(trans == std::set<Cell>{{1}, {-1}});

    // Trees have no independent cycle.
    CHECK_THROWS_AS(maximal_abelian_cover(path_graph(3)), InputError);
}

TEST_CASE("block coordinates, distance and balls") {
    auto e2 = builtin_lattice("euclidean", {2});
    LatticeVertex v{0, {2, -1}};
    CHECK(v.cell == Cell{2, -1});  // stored form is the block coordinate
    CHECK(block_distance(e2, {0, {0, 0}}, {0, {2, -1}}) == 3);  // l1 on cells
    CHECK(block_distance(e2, v, v) == 0);

    auto tri = builtin_lattice("triangular");
    CHECK(block_distance(tri, {0, {0, 0}}, {0, {1, 1}}) == 1);  // diagonal edge

    auto hex = builtin_lattice("hexagonal");
    auto b0 = block_ball(hex, {0, {0, 0}}, 0);
    CHECK(b0.size() == 2);  // the full fundamental-domain copy

    // Oracle agreement on a batch of cells.
    for (int a = -2; a <= 2; ++a)
        for (int b = -2; b <= 2; ++b) {
            auto oracle = block_bfs_oracle(tri, {0, 0}, {a, b}, 10);
            REQUIRE(oracle);
            CHECK(block_distance(tri, {0, {0, 0}}, {0, {a, b}}) == *oracle);
        }
}

TEST_CASE("essentially Euclidean classification") {
    CHECK(is_essentially_euclidean(builtin_lattice("hexagonal")).ee_at_stored_coordinate);
    CHECK(!is_essentially_euclidean(builtin_lattice("triangular")).ee_at_stored_coordinate);
    CHECK(is_essentially_euclidean(builtin_lattice("euclidean", {1})).ee_at_stored_coordinate);
    CHECK(is_essentially_euclidean(builtin_lattice("euclidean", {2})).ee_at_stored_coordinate);
    CHECK(is_essentially_euclidean(builtin_lattice("euclidean", {3})).ee_at_stored_coordinate);
    CHECK(is_essentially_euclidean(builtin_lattice("diamond")).ee_at_stored_coordinate);
    CHECK(!is_essentially_euclidean(builtin_lattice("euclidean_nearest_n", {2, 2})).ee_at_stored_coordinate);

    // Rank criterion.
    CHECK(is_essentially_euclidean(builtin_lattice("hexagonal")).rank_certified);
    CHECK(!is_essentially_euclidean(builtin_lattice("triangular")).rank_certified);

    // Brute-force agreement with the definition on a 9x9 box.
    CHECK(ee_box_oracle(builtin_lattice("hexagonal"), 4));
    CHECK(ee_box_oracle(builtin_lattice("euclidean", {2}), 4));
    CHECK(!ee_box_oracle(builtin_lattice("triangular"), 4));
    CHECK(!ee_box_oracle(builtin_lattice("euclidean_nearest_n", {2, 2}), 4));
}

TEST_CASE("essentially Euclidean equivalents satisfy the distance comparison") {
    for (const char* name : {"triangular", "hexagonal"}) {
        auto lat = builtin_lattice(name);
        auto ee = essentially_euclidean_equivalent(lat);
        CHECK(is_essentially_euclidean(ee).ee_at_stored_coordinate);
        auto consts = equivalence_constants(lat, ee);
        CHECK(consts.c >= 1);
        CHECK(consts.c_prime >= 1);
        if (std::string(name) == "triangular") {
            // The extra diagonal is two steps in the Euclidean version.
            CHECK(consts.c == 1);
            CHECK(consts.c_prime == 2);
        }
        // d_X <= C d_X' and d_X' <= C' d_X over a 5x5 cell window of pairs.
        std::vector<LatticeVertex> verts;
        for (int a = -2; a <= 2; ++a)
            for (int b = -2; b <= 2; ++b)
                for (int base = 0; base < lat.num_bases(); ++base) verts.push_back({base, {a, b}});
        LatticeVertex origin{0, {0, 0}};
        for (const auto& v : verts) {
            auto da = lattice_distance(lat, origin, v, 64);
            auto db = lattice_distance(ee, origin, v, 64);
            REQUIRE(da);
            REQUIRE(db);
            CHECK(*da <= consts.c * *db);
            CHECK(*db <= consts.c_prime * *da);
        }
    }
}

TEST_CASE("windows realize the lattice over a box") {
    auto e2 = builtin_lattice("euclidean", {2});
    CellBox box{{{-2, 2}, {-2, 2}}};
    auto w = make_window(e2, box);
    CHECK(w.num_vertices() == 25);
    CHECK(is_connected(w.graph));
    CHECK(suffix_connected(w));
    CHECK(w.margin({0, {0, 0}}) == 2);
    CHECK(w.margin({0, {2, 2}}) == 0);
    CHECK(w.id_of({0, {0, 0}}).has_value());
    CHECK(!w.id_of({0, {3, 0}}).has_value());

    // Edge instances pair up with their inverses.
    for (int e = 0; e < w.graph.num_edges(); ++e) {
        auto inv = edge_inverse(e2, w.edge_instance[e]);
        CHECK(w.edge_instance[w.graph.inverse[e]] == inv);
    }
}

TEST_CASE("hexagonal windows need the connectivity-preserving order") {
    auto hex = builtin_lattice("hexagonal");
    auto w = make_window(hex, {{{-2, 2}, {-2, 2}}});
    CHECK(w.num_vertices() == 50);
    CHECK(is_connected(w.graph));
    CHECK(suffix_connected(w));
}

TEST_CASE("one-dimensional windows") {
    auto e1 = builtin_lattice("euclidean", {1});
    auto w = make_window(e1, {{{-5, 5}}});
    CHECK(w.num_vertices() == 11);
    CHECK(suffix_connected(w));
}

TEST_CASE("complement component counts match the dimension") {
    auto e1 = builtin_lattice("euclidean", {1});
    auto w1 = make_window(e1, {{{-6, 6}}});
    std::vector<int> ball1;
    for (const auto& v : block_ball(e1, {0, {0}}, 1)) ball1.push_back(*w1.id_of(v));
    auto rep1 = complement_components(w1, ball1);
    CHECK(rep1.total_components == 2);
    CHECK(rep1.boundary_touching == 2);

    auto e2 = builtin_lattice("euclidean", {2});
    auto w2 = make_window(e2, {{{-4, 4}, {-4, 4}}});
    std::vector<int> ball2;
    for (const auto& v : block_ball(e2, {0, {0, 0}}, 1)) ball2.push_back(*w2.id_of(v));
    auto rep2 = complement_components(w2, ball2);
    CHECK(rep2.total_components == 1);
    CHECK(rep2.boundary_touching == 1);
    CHECK(rep2.enclosed == 0);

    CHECK(complement_components(w2, {}).total_components == 1);

    // A ball hugging the boundary is inconclusive.
    std::vector<int> edge_ball{*w2.id_of({0, {4, 0}})};
    CHECK_THROWS_AS(complement_components(w2, edge_ball), InconclusiveError);
}

TEST_CASE("lattice validation rejects broken presentations") {
    auto e2 = builtin_lattice("euclidean", {2});
    e2.translations[0] = {2, 0};  // no longer the negation pairing
    CHECK_THROWS_AS(e2.validate(), InputError);

    // Translations that do not span Z^2 leave the lattice disconnected.
    PeriodicLattice flat;
    flat.rank = 2;
    flat.generator_names = {"sigma_1", "sigma_2"};
    flat.seed.num_vertices = 1;
    flat.seed.strictly_symmetric = true;
    flat.seed.add_edge_pair(0, 0);
    flat.translations = {{1, 0}, {-1, 0}};
    flat.seed.finalize();
    CHECK_THROWS_AS(flat.validate(), InputError);
}
