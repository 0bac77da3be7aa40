#include "crystalforms/multigraph.hpp"

#include <algorithm>
#include <numeric>
#include <queue>

namespace crystalforms {

int MultiGraph::add_edge_pair(int from, int to) {
    int e = num_edges();
    origin.push_back(from);
    target.push_back(to);
    origin.push_back(to);
    target.push_back(from);
    inverse.push_back(e + 1);
    inverse.push_back(e);
    return e;
}

int MultiGraph::add_self_inverse_loop(int v) {
    int e = num_edges();
    origin.push_back(v);
    target.push_back(v);
    inverse.push_back(e);
    return e;
}

void MultiGraph::finalize() {
    out_edges.assign(num_vertices, {});
    for (int e = 0; e < num_edges(); ++e) out_edges[origin[e]].push_back(e);
    validate();
}

void MultiGraph::validate() const {
    const int m = num_edges();
    if (static_cast<int>(target.size()) != m || static_cast<int>(inverse.size()) != m)
        throw InputError("multigraph: edge arrays have inconsistent sizes");
    for (int e = 0; e < m; ++e) {
        if (origin[e] < 0 || origin[e] >= num_vertices || target[e] < 0 || target[e] >= num_vertices)
            throw InputError("multigraph: edge " + std::to_string(e) + " has out-of-range endpoint");
        int eb = inverse[e];
        if (eb < 0 || eb >= m) throw InputError("multigraph: edge " + std::to_string(e) + " has invalid inverse");
        if (inverse[eb] != e)
            throw InputError("multigraph: inversion is not an involution at edge " + std::to_string(e));
        if (origin[eb] != target[e] || target[eb] != origin[e])
            throw InputError("multigraph: inverse of edge " + std::to_string(e) + " does not exchange endpoints");
        if (strictly_symmetric && eb == e)
            throw InputError("multigraph: self-inverse edge " + std::to_string(e) + " in strictly symmetric graph");
    }
}

bool is_valid_path(const MultiGraph& g, const EdgePath& p) {
    for (std::size_t i = 0; i + 1 < p.edges.size(); ++i)
        if (g.target[p.edges[i]] != g.origin[p.edges[i + 1]]) return false;
    for (int e : p.edges)
        if (e < 0 || e >= g.num_edges()) return false;
    return true;
}

std::optional<int> graph_distance(const MultiGraph& g, int x, int y) {
    if (x < 0 || x >= g.num_vertices || y < 0 || y >= g.num_vertices)
        throw InputError("graph_distance: unknown vertex id");
    if (x == y) return 0;
    std::vector<int> dist(g.num_vertices, -1);
    dist[x] = 0;
    std::queue<int> bfs;
    bfs.push(x);
    while (!bfs.empty()) {
        int v = bfs.front();
        bfs.pop();
        for (int e : g.out_edges[v]) {
            int w = g.target[e];
            if (dist[w] != -1) continue;
            dist[w] = dist[v] + 1;
            if (w == y) return dist[w];
            bfs.push(w);
        }
    }
    return std::nullopt;
}

bool is_connected(const MultiGraph& g) {
    if (g.num_vertices <= 1) return true;
    std::vector<char> seen(g.num_vertices, 0);
    std::queue<int> bfs;
    bfs.push(0);
    seen[0] = 1;
    int count = 1;
    while (!bfs.empty()) {
        int v = bfs.front();
        bfs.pop();
        for (int e : g.out_edges[v]) {
            int w = g.target[e];
            if (!seen[w]) {
                seen[w] = 1;
                ++count;
                bfs.push(w);
            }
        }
    }
    return count == g.num_vertices;
}

std::vector<int> graph_ball(const MultiGraph& g, int x, int r) {
    std::vector<int> dist(g.num_vertices, -1);
    dist[x] = 0;
    std::queue<int> bfs;
    bfs.push(x);
    std::vector<int> ball{x};
    while (!bfs.empty()) {
        int v = bfs.front();
        bfs.pop();
        if (dist[v] == r) continue;
        for (int e : g.out_edges[v]) {
            int w = g.target[e];
            if (dist[w] != -1) continue;
            dist[w] = dist[v] + 1;
            ball.push_back(w);
            bfs.push(w);
        }
    }
    std::sort(ball.begin(), ball.end());
    return ball;
}

void GraphMorphism::validate() const {
    if (!dom || !cod) throw InputError("morphism: missing graphs");
    if (static_cast<int>(vertex_map.size()) != dom->num_vertices ||
        static_cast<int>(edge_map.size()) != dom->num_edges())
        throw InputError("morphism: map sizes do not match the domain");
    for (int v : vertex_map)
        if (v < 0 || v >= cod->num_vertices) throw InputError("morphism: vertex image out of range");
    for (int e = 0; e < dom->num_edges(); ++e) {
        int fe = edge_map[e];
        if (fe < 0 || fe >= cod->num_edges()) throw InputError("morphism: edge image out of range");
        if (cod->origin[fe] != vertex_map[dom->origin[e]] || cod->target[fe] != vertex_map[dom->target[e]])
            throw InputError("morphism: incompatible with incidence at edge " + std::to_string(e));
        if (edge_map[dom->inverse[e]] != cod->inverse[fe])
            throw InputError("morphism: incompatible with inversion at edge " + std::to_string(e));
    }
}

bool GraphMorphism::is_automorphism() const {
    validate();
    if (dom->num_vertices != cod->num_vertices || dom->num_edges() != cod->num_edges()) return false;
    std::vector<char> vhit(cod->num_vertices, 0), ehit(cod->num_edges(), 0);
    for (int v : vertex_map) {
        if (vhit[v]) return false;
        vhit[v] = 1;
    }
    for (int e : edge_map) {
        if (ehit[e]) return false;
        ehit[e] = 1;
    }
    return true;
}

bool is_covering(const GraphMorphism& m) {
    m.validate();
    std::vector<char> vhit(m.cod->num_vertices, 0), ehit(m.cod->num_edges(), 0);
    for (int v : m.vertex_map) vhit[v] = 1;
    for (int e : m.edge_map) ehit[e] = 1;
    if (std::count(vhit.begin(), vhit.end(), 1) != m.cod->num_vertices) return false;
    if (std::count(ehit.begin(), ehit.end(), 1) != m.cod->num_edges()) return false;
    // Each outgoing star must map bijectively onto the image star.
    for (int x = 0; x < m.dom->num_vertices; ++x) {
        const auto& star = m.dom->out_edges[x];
        const auto& image_star = m.cod->out_edges[m.vertex_map[x]];
        if (star.size() != image_star.size()) return false;
        std::vector<int> mapped;
        mapped.reserve(star.size());
        for (int e : star) mapped.push_back(m.edge_map[e]);
        std::sort(mapped.begin(), mapped.end());
        if (std::adjacent_find(mapped.begin(), mapped.end()) != mapped.end()) return false;
        std::vector<int> expected = image_star;
        std::sort(expected.begin(), expected.end());
        if (mapped != expected) return false;
    }
    return true;
}

namespace {

struct UnionFind {
    std::vector<int> parent;
    explicit UnionFind(int n) : parent(n) { std::iota(parent.begin(), parent.end(), 0); }
    int find(int x) {
        while (parent[x] != x) x = parent[x] = parent[parent[x]];
        return x;
    }
    void unite(int a, int b) {
        a = find(a);
        b = find(b);
        if (a != b) parent[std::max(a, b)] = std::min(a, b);
    }
};

}  // namespace

QuotientResult quotient_by_action(const MultiGraph& g, const std::vector<GraphMorphism>& generators) {
    for (const auto& gen : generators) {
        if (gen.dom != &g || gen.cod != &g)
            throw InputError("quotient: generator is not an endomorphism of the graph");
        if (!gen.is_automorphism()) throw InputError("quotient: generator is not an automorphism");
    }
    UnionFind vu(g.num_vertices), eu(g.num_edges());
    for (const auto& gen : generators) {
        for (int v = 0; v < g.num_vertices; ++v) vu.unite(v, gen.vertex_map[v]);
        for (int e = 0; e < g.num_edges(); ++e) eu.unite(e, gen.edge_map[e]);
    }
    // Dense ids for orbits, ordered by their least representative.
    std::vector<int> vid(g.num_vertices, -1), eid(g.num_edges(), -1);
    int nv = 0, ne = 0;
    for (int v = 0; v < g.num_vertices; ++v)
        if (vu.find(v) == v) vid[v] = nv++;
    for (int e = 0; e < g.num_edges(); ++e)
        if (eu.find(e) == e) eid[e] = ne++;

    QuotientResult out;
    out.vertex_orbit.resize(g.num_vertices);
    out.edge_orbit.resize(g.num_edges());
    for (int v = 0; v < g.num_vertices; ++v) out.vertex_orbit[v] = vid[vu.find(v)];
    for (int e = 0; e < g.num_edges(); ++e) out.edge_orbit[e] = eid[eu.find(e)];

    out.quotient.num_vertices = nv;
    out.quotient.origin.resize(ne);
    out.quotient.target.resize(ne);
    out.quotient.inverse.resize(ne);
    for (int e = 0; e < g.num_edges(); ++e) {
        if (eu.find(e) != e) continue;
        int q = eid[e];
        out.quotient.origin[q] = out.vertex_orbit[g.origin[e]];
        out.quotient.target[q] = out.vertex_orbit[g.target[e]];
        out.quotient.inverse[q] = out.edge_orbit[g.inverse[e]];
    }
    out.quotient.finalize();
    return out;
}

GraphMorphism quotient_projection(const MultiGraph& g, const QuotientResult& q) {
    GraphMorphism m;
    m.dom = &g;
    m.cod = &q.quotient;
    m.vertex_map = q.vertex_orbit;
    m.edge_map = q.edge_orbit;
    m.validate();
    return m;
}

MultiGraph path_graph(int n) {
    if (n < 1) throw InputError("path_graph: need at least one vertex");
    MultiGraph g;
    g.num_vertices = n;
    g.strictly_symmetric = true;
    for (int i = 0; i + 1 < n; ++i) g.add_edge_pair(i, i + 1);
    g.finalize();
    return g;
}

MultiGraph cycle_graph(int n) {
    if (n < 2) throw InputError("cycle_graph: need at least two vertices");
    MultiGraph g;
    g.num_vertices = n;
    g.strictly_symmetric = true;
    for (int i = 0; i < n; ++i) g.add_edge_pair(i, (i + 1) % n);
    g.finalize();
    return g;
}

}  // namespace crystalforms
