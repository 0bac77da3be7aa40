#include "crystalforms/crystal.hpp"

#include <algorithm>
#include <queue>
#include <set>
#include <unordered_set>

#include "crystalforms/linalg.hpp"

namespace crystalforms {

Cell cell_add(const Cell& a, const Cell& b) {
    Cell r(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) r[i] = a[i] + b[i];
    return r;
}

Cell cell_sub(const Cell& a, const Cell& b) {
    Cell r(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) r[i] = a[i] - b[i];
    return r;
}

Cell cell_neg(const Cell& a) {
    Cell r(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) r[i] = -a[i];
    return r;
}

int cell_l1(const Cell& a) {
    int s = 0;
    for (int v : a) s += v < 0 ? -v : v;
    return s;
}

std::size_t LatticeVertexHash::operator()(const LatticeVertex& v) const {
    std::size_t h = 1469598103934665603ULL;
    h = hash_combine(h, static_cast<std::size_t>(v.base));
    for (int c : v.cell) h = hash_combine(h, static_cast<std::size_t>(static_cast<std::uint64_t>(c) + 0x8000000000ULL));
    return h;
}

namespace {

struct CellHash {
    std::size_t operator()(const Cell& c) const {
        std::size_t h = 14695981039346656037ULL;
        for (int v : c) h = hash_combine(h, static_cast<std::size_t>(static_cast<std::uint64_t>(v) + 0x8000000000ULL));
        return h;
    }
};

}  // namespace

void PeriodicLattice::validate() const {
    seed.validate();
    if (!seed.strictly_symmetric) throw InputError("lattice: seed crystal must be strictly symmetric");
    if (!is_connected(seed)) throw InputError("lattice: seed crystal must be connected");
    if (rank < 1) throw InputError("lattice: rank must be at least 1");
    if (static_cast<int>(translations.size()) != seed.num_edges())
        throw InputError("lattice: one translation vector per seed edge required");
    if (static_cast<int>(generator_names.size()) != rank)
        throw InputError("lattice: one generator name per rank required");
    for (int e = 0; e < seed.num_edges(); ++e) {
        if (static_cast<int>(translations[e].size()) != rank)
            throw InputError("lattice: translation of edge " + std::to_string(e) + " has wrong dimension");
        if (translations[seed.inverse[e]] != cell_neg(translations[e]))
            throw InputError("lattice: translation of inverse edge " + std::to_string(e) + " is not negated");
    }
    // Connectivity of the realized lattice: the translation vectors of a
    // spanning set of closed walks must generate Z^d. Potentials along a
    // BFS tree turn each edge into its closed-walk vector.
    std::vector<Cell> potential(seed.num_vertices, Cell(rank, 0));
    std::vector<char> seen(seed.num_vertices, 0);
    std::queue<int> bfs;
    bfs.push(0);
    seen[0] = 1;
    while (!bfs.empty()) {
        int v = bfs.front();
        bfs.pop();
        for (int e : seed.out_edges[v]) {
            int w = seed.target[e];
            if (seen[w]) continue;
            seen[w] = 1;
            potential[w] = cell_add(potential[v], translations[e]);
            bfs.push(w);
        }
    }
    std::vector<std::vector<std::int64_t>> cycle_vectors;
    for (int e = 0; e < seed.num_edges(); ++e) {
        Cell vec = cell_sub(cell_add(potential[seed.origin[e]], translations[e]), potential[seed.target[e]]);
        if (vec == Cell(rank, 0)) continue;
        cycle_vectors.emplace_back(vec.begin(), vec.end());
    }
    if (!generates_full_lattice(cycle_vectors, static_cast<std::size_t>(rank)))
        throw InputError("lattice: realized graph is disconnected (cycle translations do not generate Z^d)");
}

LatticeVertex edge_origin(const PeriodicLattice& lat, const LatticeEdge& e) {
    return {lat.seed.origin[e.seed_edge], e.anchor};
}

LatticeVertex edge_target(const PeriodicLattice& lat, const LatticeEdge& e) {
    return {lat.seed.target[e.seed_edge], cell_add(e.anchor, lat.translations[e.seed_edge])};
}

LatticeEdge edge_inverse(const PeriodicLattice& lat, const LatticeEdge& e) {
    return {lat.seed.inverse[e.seed_edge], cell_add(e.anchor, lat.translations[e.seed_edge])};
}

std::vector<LatticeEdge> edges_at(const PeriodicLattice& lat, const LatticeVertex& v) {
    std::vector<LatticeEdge> out;
    for (int e : lat.seed.out_edges[v.base]) out.push_back({e, v.cell});
    return out;
}

std::optional<int> lattice_distance(const PeriodicLattice& lat, const LatticeVertex& a,
                                    const LatticeVertex& b, int limit) {
    if (a == b) return 0;
    std::unordered_set<LatticeVertex, LatticeVertexHash> seen{a};
    std::vector<LatticeVertex> frontier{a};
    for (int depth = 1; depth <= limit; ++depth) {
        std::vector<LatticeVertex> next;
        for (const auto& v : frontier) {
            for (const auto& e : edges_at(lat, v)) {
                LatticeVertex w = edge_target(lat, e);
                if (!seen.insert(w).second) continue;
                if (w == b) return depth;
                next.push_back(w);
            }
        }
        if (next.empty()) return std::nullopt;
        frontier = std::move(next);
    }
    return std::nullopt;
}

std::vector<LatticeVertex> lattice_graph_ball(const PeriodicLattice& lat, const LatticeVertex& c, int r) {
    std::unordered_set<LatticeVertex, LatticeVertexHash> seen{c};
    std::vector<LatticeVertex> frontier{c};
    std::vector<LatticeVertex> ball{c};
    for (int depth = 1; depth <= r; ++depth) {
        std::vector<LatticeVertex> next;
        for (const auto& v : frontier) {
            for (const auto& e : edges_at(lat, v)) {
                LatticeVertex w = edge_target(lat, e);
                if (!seen.insert(w).second) continue;
                ball.push_back(w);
                next.push_back(w);
            }
        }
        frontier = std::move(next);
    }
    std::sort(ball.begin(), ball.end());
    return ball;
}

BlockGeometry::BlockGeometry(const PeriodicLattice& lat) : d_(lat.rank) {
    std::set<Cell> steps;
    for (const auto& t : lat.translations) {
        if (t == Cell(d_, 0)) continue;
        steps.insert(t);
        steps.insert(cell_neg(t));
    }
    steps_.assign(steps.begin(), steps.end());
    std::vector<char> dir_present(d_, 0);
    unit_steps_only_ = true;
    for (const auto& s : steps_) {
        if (cell_l1(s) != 1) {
            unit_steps_only_ = false;
            break;
        }
        for (int j = 0; j < d_; ++j)
            if (s[j] != 0) dir_present[j] = 1;
    }
    if (unit_steps_only_)
        for (int j = 0; j < d_; ++j)
            if (!dir_present[j]) unit_steps_only_ = false;
}

std::optional<int> BlockGeometry::distance(const Cell& a, const Cell& b, int limit) const {
    Cell diff = cell_sub(b, a);
    if (unit_steps_only_) {
        int l1 = cell_l1(diff);
        if (l1 > limit) return std::nullopt;
        return l1;
    }
    if (diff == Cell(d_, 0)) return 0;
    std::unordered_set<Cell, CellHash> seen{Cell(d_, 0)};
    std::vector<Cell> frontier{Cell(d_, 0)};
    for (int depth = 1; depth <= limit; ++depth) {
        std::vector<Cell> next;
        for (const auto& c : frontier) {
            for (const auto& s : steps_) {
                Cell w = cell_add(c, s);
                if (!seen.insert(w).second) continue;
                if (w == diff) return depth;
                next.push_back(w);
            }
        }
        if (next.empty()) return std::nullopt;
        frontier = std::move(next);
    }
    return std::nullopt;
}

std::vector<Cell> BlockGeometry::ball(const Cell& center, int radius) const {
    std::unordered_set<Cell, CellHash> seen{center};
    std::vector<Cell> frontier{center};
    std::vector<Cell> out{center};
    for (int depth = 1; depth <= radius; ++depth) {
        std::vector<Cell> next;
        for (const auto& c : frontier) {
            for (const auto& s : steps_) {
                Cell w = cell_add(c, s);
                if (!seen.insert(w).second) continue;
                out.push_back(w);
                next.push_back(w);
            }
        }
        frontier = std::move(next);
    }
    std::sort(out.begin(), out.end());
    return out;
}

int block_distance(const PeriodicLattice& lat, const LatticeVertex& v, const LatticeVertex& w) {
    BlockGeometry geo(lat);
    int limit = 8 * (cell_l1(cell_sub(v.cell, w.cell)) + 4);
    auto d = geo.distance(v.cell, w.cell, limit);
    if (!d) throw InconclusiveError("block_distance: exceeded search limit");
    return *d;
}

std::vector<LatticeVertex> block_ball(const PeriodicLattice& lat, const LatticeVertex& v, int radius) {
    BlockGeometry geo(lat);
    std::vector<LatticeVertex> out;
    for (const auto& c : geo.ball(v.cell, radius))
        for (int b = 0; b < lat.num_bases(); ++b) out.push_back({b, c});
    std::sort(out.begin(), out.end());
    return out;
}

int block_diameter(const PeriodicLattice& lat, const std::vector<LatticeVertex>& vs) {
    BlockGeometry geo(lat);
    int diam = 0;
    for (std::size_t i = 0; i < vs.size(); ++i)
        for (std::size_t j = i + 1; j < vs.size(); ++j) {
            int limit = 8 * (cell_l1(cell_sub(vs[i].cell, vs[j].cell)) + 4);
            auto d = geo.distance(vs[i].cell, vs[j].cell, limit);
            if (!d) throw InconclusiveError("block_diameter: exceeded search limit");
            diam = std::max(diam, *d);
        }
    return diam;
}

EEReport is_essentially_euclidean(const PeriodicLattice& lat) {
    EEReport rep;
    BlockGeometry geo(lat);
    rep.ee_at_stored_coordinate = geo.unit_steps_only();
    if (!rep.ee_at_stored_coordinate) {
        for (const auto& t : lat.translations) {
            if (t != Cell(lat.rank, 0) && cell_l1(t) != 1) {
                rep.offending_translation = t;
                break;
            }
        }
    }
    rep.rank_formula_value = 1 - lat.seed.num_vertices + lat.seed.num_edges() / 2;
    rep.rank_certified = rep.rank_formula_value == lat.rank;
    return rep;
}

PeriodicLattice essentially_euclidean_equivalent(const PeriodicLattice& lat) {
    PeriodicLattice out;
    out.rank = lat.rank;
    out.generator_names = lat.generator_names;
    out.name = lat.name + "_ee";
    const int nb = lat.num_bases();
    out.seed.num_vertices = nb;
    out.seed.strictly_symmetric = true;
    auto add = [&](int a, int b, const Cell& t) {
        out.seed.add_edge_pair(a, b);
        out.translations.push_back(t);
        out.translations.push_back(cell_neg(t));
    };
    for (int a = 0; a < nb; ++a)
        for (int b = a + 1; b < nb; ++b) add(a, b, Cell(lat.rank, 0));
    for (int j = 0; j < lat.rank; ++j) {
        Cell unit(lat.rank, 0);
        unit[j] = 1;
        for (int a = 0; a < nb; ++a)
            for (int b = 0; b < nb; ++b) add(a, b, unit);
    }
    out.seed.finalize();
    out.validate();
    return out;
}

EquivalenceConstants equivalence_constants(const PeriodicLattice& a, const PeriodicLattice& b, int limit) {
    if (a.num_bases() != b.num_bases() || a.rank != b.rank)
        throw InputError("equivalence_constants: lattices must share the vertex set");
    EquivalenceConstants out;
    for (int e = 0; e < b.seed.num_edges(); ++e) {
        LatticeEdge inst{e, Cell(b.rank, 0)};
        auto d = lattice_distance(a, edge_origin(b, inst), edge_target(b, inst), limit);
        if (!d) throw InconclusiveError("equivalence_constants: endpoint distance above limit");
        out.c = std::max(out.c, *d);
    }
    for (int e = 0; e < a.seed.num_edges(); ++e) {
        LatticeEdge inst{e, Cell(a.rank, 0)};
        auto d = lattice_distance(b, edge_origin(a, inst), edge_target(a, inst), limit);
        if (!d) throw InconclusiveError("equivalence_constants: endpoint distance above limit");
        out.c_prime = std::max(out.c_prime, *d);
    }
    return out;
}

namespace {

std::vector<std::string> default_generators(int d) {
    std::vector<std::string> names;
    for (int j = 1; j <= d; ++j) names.push_back("sigma_" + std::to_string(j));
    return names;
}

PeriodicLattice single_base_lattice(int d, const std::vector<Cell>& half_steps, const std::string& name) {
    PeriodicLattice lat;
    lat.rank = d;
    lat.generator_names = default_generators(d);
    lat.name = name;
    lat.seed.num_vertices = 1;
    lat.seed.strictly_symmetric = true;
    for (const auto& s : half_steps) {
        lat.seed.add_edge_pair(0, 0);
        lat.translations.push_back(s);
        lat.translations.push_back(cell_neg(s));
    }
    lat.seed.finalize();
    lat.validate();
    return lat;
}

PeriodicLattice two_base_lattice(const std::vector<Cell>& bridge_steps, const std::string& name) {
    PeriodicLattice lat;
    lat.rank = static_cast<int>(bridge_steps.front().size());
    lat.generator_names = default_generators(lat.rank);
    lat.name = name;
    lat.seed.num_vertices = 2;
    lat.seed.strictly_symmetric = true;
    for (const auto& s : bridge_steps) {
        lat.seed.add_edge_pair(0, 1);
        lat.translations.push_back(s);
        lat.translations.push_back(cell_neg(s));
    }
    lat.seed.finalize();
    lat.validate();
    return lat;
}

}  // namespace

PeriodicLattice builtin_lattice(const std::string& name, const std::vector<int>& params) {
    if (name == "euclidean") {
        if (params.size() != 1 || params[0] < 1) throw InputError("euclidean lattice needs dimension d >= 1");
        int d = params[0];
        std::vector<Cell> half;
        for (int j = 0; j < d; ++j) {
            Cell u(d, 0);
            u[j] = 1;
            half.push_back(u);
        }
        return single_base_lattice(d, half, "euclidean_" + std::to_string(d));
    }
    if (name == "euclidean_nearest_n") {
        if (params.size() != 2 || params[0] < 1 || params[1] < 1)
            throw InputError("euclidean_nearest_n lattice needs d >= 1 and n >= 1");
        int d = params[0], n = params[1];
        // One representative per +- pair: lexicographically positive vectors
        // with 0 < |v|_1 <= n.
        std::vector<Cell> half;
        Cell v(d, -n);
        while (true) {
            int l1 = cell_l1(v);
            if (l1 > 0 && l1 <= n) {
                bool lex_positive = false;
                for (int j = 0; j < d; ++j) {
                    if (v[j] != 0) {
                        lex_positive = v[j] > 0;
                        break;
                    }
                }
                if (lex_positive) half.push_back(v);
            }
            int j = d - 1;
            while (j >= 0 && v[j] == n) {
                v[j] = -n;
                --j;
            }
            if (j < 0) break;
            ++v[j];
        }
        std::sort(half.begin(), half.end());
        return single_base_lattice(d, half, "euclidean_nearest_" + std::to_string(d) + "_" + std::to_string(n));
    }
    if (name == "hexagonal") {
        if (!params.empty()) throw InputError("hexagonal lattice takes no parameters");
        return two_base_lattice({{0, 0}, {1, 0}, {0, 1}}, "hexagonal");
    }
    if (name == "triangular") {
        if (!params.empty()) throw InputError("triangular lattice takes no parameters");
        return single_base_lattice(2, {{1, 0}, {0, 1}, {1, 1}}, "triangular");
    }
    if (name == "diamond") {
        if (!params.empty()) throw InputError("diamond lattice takes no parameters");
        return two_base_lattice({{0, 0, 0}, {1, 0, 0}, {0, 1, 0}, {0, 0, 1}}, "diamond");
    }
    throw InputError("unknown builtin lattice '" + name + "'");
}

PeriodicLattice maximal_abelian_cover(const MultiGraph& seed) {
    seed.validate();
    if (!seed.strictly_symmetric) throw InputError("abelian cover: seed must be strictly symmetric");
    if (!is_connected(seed)) throw InputError("abelian cover: seed must be connected");
    int d = 1 - seed.num_vertices + seed.num_edges() / 2;
    if (d < 1)
        throw InputError("abelian cover: seed has no independent cycle (rank " + std::to_string(d) +
                         "), so the cover would not be a lattice");
    // BFS spanning tree; tree edges carry zero, the k-th cotree pair +-e_k.
    std::vector<char> seen(seed.num_vertices, 0);
    std::vector<char> in_tree(seed.num_edges(), 0);
    std::queue<int> bfs;
    bfs.push(0);
    seen[0] = 1;
    while (!bfs.empty()) {
        int v = bfs.front();
        bfs.pop();
        for (int e : seed.out_edges[v]) {
            int w = seed.target[e];
            if (seen[w]) continue;
            seen[w] = 1;
            in_tree[e] = 1;
            in_tree[seed.inverse[e]] = 1;
            bfs.push(w);
        }
    }
    PeriodicLattice lat;
    lat.seed = seed;
    lat.rank = d;
    lat.generator_names = default_generators(d);
    lat.name = "abelian_cover";
    lat.translations.assign(seed.num_edges(), Cell(d, 0));
    int next_axis = 0;
    for (int e = 0; e < seed.num_edges(); ++e) {
        if (in_tree[e] || e > seed.inverse[e]) continue;
        if (lat.translations[e] != Cell(d, 0)) continue;
        Cell unit(d, 0);
        unit[next_axis++] = 1;
        lat.translations[e] = unit;
        lat.translations[seed.inverse[e]] = cell_neg(unit);
    }
    if (next_axis != d) throw InternalError("abelian cover: cotree count does not match rank");
    lat.seed.finalize();
    lat.validate();
    return lat;
}

bool CellBox::contains(const Cell& c) const {
    if (c.size() != range.size()) return false;
    for (std::size_t j = 0; j < range.size(); ++j)
        if (c[j] < range[j].first || c[j] > range[j].second) return false;
    return true;
}

std::vector<Cell> CellBox::cells() const {
    std::vector<Cell> out;
    Cell c;
    c.reserve(range.size());
    for (const auto& [lo, hi] : range) {
        if (lo > hi) throw InputError("cell box: empty axis range");
        c.push_back(lo);
    }
    while (true) {
        out.push_back(c);
        int j = static_cast<int>(range.size()) - 1;
        while (j >= 0 && c[j] == range[j].second) {
            c[j] = range[j].first;
            --j;
        }
        if (j < 0) break;
        ++c[j];
    }
    return out;
}

std::optional<int> FiniteWindow::id_of(const LatticeVertex& v) const {
    auto it = vert_id.find(v);
    if (it == vert_id.end()) return std::nullopt;
    return it->second;
}

int FiniteWindow::margin(const LatticeVertex& v) const {
    BlockGeometry geo(*lat);
    std::unordered_set<Cell, CellHash> seen{v.cell};
    std::vector<Cell> frontier{v.cell};
    if (!box.contains(v.cell)) return 0;
    for (int depth = 1;; ++depth) {
        std::vector<Cell> next;
        for (const auto& c : frontier)
            for (const auto& s : geo.steps()) {
                Cell w = cell_add(c, s);
                if (!seen.insert(w).second) continue;
                if (!box.contains(w)) return depth - 1;
                next.push_back(w);
            }
        if (next.empty()) return depth;  // steps cannot leave the box at all
        frontier = std::move(next);
    }
}

namespace {

// Lexicographically least elimination order whose suffixes all induce
// connected subgraphs: repeatedly remove the least non-cut vertex.
std::vector<int> connected_elimination_order(const MultiGraph& g) {
    const int n = g.num_vertices;
    std::vector<std::vector<int>> adj(n);
    for (int e = 0; e < g.num_edges(); ++e) {
        if (g.origin[e] != g.target[e]) adj[g.origin[e]].push_back(g.target[e]);
    }
    for (auto& a : adj) {
        std::sort(a.begin(), a.end());
        a.erase(std::unique(a.begin(), a.end()), a.end());
    }
    std::vector<char> alive(n, 1);
    std::vector<int> order;
    order.reserve(n);
    std::vector<int> disc(n), low(n), parent(n);
    std::vector<char> is_cut(n);
    int alive_count = n;
    while (alive_count > 0) {
        if (alive_count == 1) {
            for (int v = 0; v < n; ++v)
                if (alive[v]) {
                    order.push_back(v);
                    alive[v] = 0;
                    --alive_count;
                }
            break;
        }
        // Articulation points of the alive-induced graph (iterative DFS).
        std::fill(disc.begin(), disc.end(), -1);
        std::fill(is_cut.begin(), is_cut.end(), 0);
        int root = -1, timer = 0, visited = 0;
        for (int v = 0; v < n; ++v)
            if (alive[v]) {
                root = v;
                break;
            }
        std::vector<std::pair<int, std::size_t>> stack{{root, 0}};
        parent[root] = -1;
        disc[root] = low[root] = timer++;
        ++visited;
        int root_children = 0;
        while (!stack.empty()) {
            auto& [v, idx] = stack.back();
            if (idx < adj[v].size()) {
                int w = adj[v][idx++];
                if (!alive[w]) continue;
                if (disc[w] == -1) {
                    parent[w] = v;
                    disc[w] = low[w] = timer++;
                    ++visited;
                    if (v == root) ++root_children;
                    stack.push_back({w, 0});
                } else if (w != parent[v]) {
                    low[v] = std::min(low[v], disc[w]);
                }
            } else {
                stack.pop_back();
                if (!stack.empty()) {
                    int p = stack.back().first;
                    low[p] = std::min(low[p], low[v]);
                    if (p != root && low[v] >= disc[p]) is_cut[p] = 1;
                }
            }
        }
        if (visited != alive_count)
            throw InputError("window: realized graph is disconnected; enlarge or reshape the box");
        if (root_children > 1) is_cut[root] = 1;
        int pick = -1;
        for (int v = 0; v < n; ++v)
            if (alive[v] && !is_cut[v]) {
                pick = v;
                break;
            }
        if (pick == -1) throw InternalError("window: no removable vertex found");
        order.push_back(pick);
        alive[pick] = 0;
        --alive_count;
    }
    return order;
}

}  // namespace

FiniteWindow make_window(const PeriodicLattice& lat, const CellBox& box) {
    lat.validate();
    if (box.dim() != lat.rank) throw InputError("window: box dimension does not match lattice rank");
    FiniteWindow w;
    w.lat = std::make_shared<PeriodicLattice>(lat);
    w.box = box;
    for (const auto& c : box.cells())
        for (int b = 0; b < lat.num_bases(); ++b) w.verts.push_back({b, c});
    std::sort(w.verts.begin(), w.verts.end());
    for (int i = 0; i < static_cast<int>(w.verts.size()); ++i) w.vert_id.emplace(w.verts[i], i);

    w.graph.num_vertices = static_cast<int>(w.verts.size());
    w.boundary.assign(w.verts.size(), 0);
    std::map<LatticeEdge, int> edge_ids;
    for (int vid = 0; vid < static_cast<int>(w.verts.size()); ++vid) {
        for (const auto& inst : edges_at(lat, w.verts[vid])) {
            LatticeVertex tgt = edge_target(lat, inst);
            auto tid = w.id_of(tgt);
            if (!tid) {
                w.boundary[vid] = 1;
                continue;
            }
            int eid = static_cast<int>(w.edge_instance.size());
            edge_ids.emplace(inst, eid);
            w.edge_instance.push_back(inst);
            w.graph.origin.push_back(vid);
            w.graph.target.push_back(*tid);
            w.graph.inverse.push_back(-1);
        }
    }
    for (int e = 0; e < static_cast<int>(w.edge_instance.size()); ++e) {
        auto it = edge_ids.find(edge_inverse(lat, w.edge_instance[e]));
        if (it == edge_ids.end()) throw InternalError("window: inverse edge instance missing");
        w.graph.inverse[e] = it->second;
    }
    w.graph.strictly_symmetric = lat.seed.strictly_symmetric;
    w.graph.finalize();

    w.canonical_order = connected_elimination_order(w.graph);
    w.order_pos.assign(w.verts.size(), -1);
    for (int k = 0; k < static_cast<int>(w.canonical_order.size()); ++k) w.order_pos[w.canonical_order[k]] = k;
    return w;
}

ComplementReport complement_components(const FiniteWindow& w, const std::vector<int>& removed_ids) {
    std::vector<char> removed(w.num_vertices(), 0);
    for (int v : removed_ids) {
        if (v < 0 || v >= w.num_vertices()) throw InputError("complement_components: vertex id out of range");
        removed[v] = 1;
    }
    // The removed set plus its 1-neighborhood must be interior.
    for (int v : removed_ids) {
        if (w.boundary[v])
            throw InconclusiveError("complement_components: removed set touches the window boundary");
        for (int e : w.graph.out_edges[v])
            if (w.boundary[w.graph.target[e]])
                throw InconclusiveError("complement_components: removed set touches the window boundary");
    }
    ComplementReport rep;
    std::vector<int> comp(w.num_vertices(), -1);
    for (int v = 0; v < w.num_vertices(); ++v) {
        if (removed[v] || comp[v] != -1) continue;
        int c = rep.total_components++;
        bool touches = false;
        std::queue<int> bfs;
        bfs.push(v);
        comp[v] = c;
        while (!bfs.empty()) {
            int x = bfs.front();
            bfs.pop();
            if (w.boundary[x]) touches = true;
            for (int e : w.graph.out_edges[x]) {
                int y = w.graph.target[e];
                if (removed[y] || comp[y] != -1) continue;
                comp[y] = c;
                bfs.push(y);
            }
        }
        if (touches)
            ++rep.boundary_touching;
        else
            ++rep.enclosed;
    }
    return rep;
}

TorusRealization torus_realization(const PeriodicLattice& lat, const std::vector<int>& sizes) {
    lat.validate();
    if (static_cast<int>(sizes.size()) != lat.rank) throw InputError("torus: one size per axis required");
    for (int s : sizes)
        if (s < 1) throw InputError("torus: sizes must be positive");
    TorusRealization t;
    CellBox box;
    for (int s : sizes) box.range.push_back({0, s - 1});
    for (const auto& c : box.cells())
        for (int b = 0; b < lat.num_bases(); ++b) t.verts.push_back({b, c});
    std::sort(t.verts.begin(), t.verts.end());
    std::map<LatticeVertex, int> ids;
    for (int i = 0; i < static_cast<int>(t.verts.size()); ++i) ids.emplace(t.verts[i], i);
    auto wrap = [&](Cell c) {
        for (int j = 0; j < lat.rank; ++j) c[j] = ((c[j] % sizes[j]) + sizes[j]) % sizes[j];
        return c;
    };
    t.graph.num_vertices = static_cast<int>(t.verts.size());
    std::map<LatticeEdge, int> edge_ids;
    std::vector<LatticeEdge> insts;
    for (const auto& v : t.verts) {
        for (const auto& inst : edges_at(lat, v)) {
            int eid = static_cast<int>(insts.size());
            edge_ids.emplace(inst, eid);
            insts.push_back(inst);
            LatticeVertex tgt = edge_target(lat, inst);
            t.graph.origin.push_back(ids.at(v));
            t.graph.target.push_back(ids.at({tgt.base, wrap(tgt.cell)}));
            t.graph.inverse.push_back(-1);
        }
    }
    for (int e = 0; e < static_cast<int>(insts.size()); ++e) {
        LatticeEdge inv = edge_inverse(lat, insts[e]);
        inv.anchor = wrap(inv.anchor);
        t.graph.inverse[e] = edge_ids.at(inv);
    }
    t.graph.strictly_symmetric = false;  // wrapping can identify an edge with its inverse
    t.graph.finalize();
    for (int j = 0; j < lat.rank; ++j) {
        std::vector<int> vmap(t.verts.size()), emap(insts.size());
        Cell unit(lat.rank, 0);
        unit[j] = 1;
        for (int i = 0; i < static_cast<int>(t.verts.size()); ++i) {
            const auto& v = t.verts[i];
            vmap[i] = ids.at({v.base, wrap(cell_add(v.cell, unit))});
        }
        for (int e = 0; e < static_cast<int>(insts.size()); ++e)
            emap[e] = edge_ids.at({insts[e].seed_edge, wrap(cell_add(insts[e].anchor, unit))});
        t.gen_vertex_maps.push_back(std::move(vmap));
        t.gen_edge_maps.push_back(std::move(emap));
    }
    return t;
}

}  // namespace crystalforms
