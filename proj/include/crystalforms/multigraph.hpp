#pragma once

#include <optional>
#include <string>
#include <vector>

#include "crystalforms/errors.hpp"

namespace crystalforms {

// Symmetric directed multi-graph: every edge e has an inverse edge
// inverse[e] with origin/target exchanged. Loops may be their own
// inverse unless the graph is flagged strictly symmetric.
struct MultiGraph {
    int num_vertices = 0;
    std::vector<int> origin;
    std::vector<int> target;
    std::vector<int> inverse;
    bool strictly_symmetric = false;

    std::vector<std::vector<int>> out_edges;  // per vertex, edge ids in increasing order

    int num_edges() const { return static_cast<int>(origin.size()); }

    void add_vertex_count(int n) { num_vertices = n; }

    // Adds the pair {e, inverse(e)} and returns the id of the forward edge.
    int add_edge_pair(int from, int to);

    // Adds a single self-inverse loop at v (only valid when not strictly symmetric).
    int add_self_inverse_loop(int v);

    void finalize();  // builds adjacency, runs validate()
    void validate() const;
};

struct EdgePath {
    std::vector<int> edges;  // consecutive: target(e_i) == origin(e_{i+1})
};

bool is_valid_path(const MultiGraph& g, const EdgePath& p);

// Shortest path length, or nullopt when unreachable (the infinity marker).
std::optional<int> graph_distance(const MultiGraph& g, int x, int y);

bool is_connected(const MultiGraph& g);

// Vertices reachable from x within distance r.
std::vector<int> graph_ball(const MultiGraph& g, int x, int r);

struct GraphMorphism {
    const MultiGraph* dom = nullptr;
    const MultiGraph* cod = nullptr;
    std::vector<int> vertex_map;
    std::vector<int> edge_map;

    void validate() const;  // commutes with incidence and inversion
    bool is_automorphism() const;
};

bool is_covering(const GraphMorphism& m);

struct QuotientResult {
    MultiGraph quotient;
    std::vector<int> vertex_orbit;  // dom vertex -> quotient vertex
    std::vector<int> edge_orbit;    // dom edge -> quotient edge
};

// Quotient by the group generated by the given automorphisms.
QuotientResult quotient_by_action(const MultiGraph& g, const std::vector<GraphMorphism>& generators);

GraphMorphism quotient_projection(const MultiGraph& g, const QuotientResult& q);

MultiGraph path_graph(int n);
MultiGraph cycle_graph(int n);

}  // namespace crystalforms
