#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "crystalforms/multigraph.hpp"
#include "crystalforms/rational.hpp"

namespace crystalforms {

using Cell = std::vector<int>;  // Z^d block coordinate

Cell cell_add(const Cell& a, const Cell& b);
Cell cell_sub(const Cell& a, const Cell& b);
Cell cell_neg(const Cell& a);
int cell_l1(const Cell& a);

// Periodic lattice presented by a finite seed crystal plus a Z^d
// translation vector on every seed edge (target cell minus origin cell).
// The fundamental domain is the cell-0 copy of the seed vertices, and the
// free generators are the unit translations of Z^d.
struct PeriodicLattice {
    MultiGraph seed;  // strictly symmetric, finite, connected
    int rank = 0;
    std::vector<Cell> translations;           // per seed edge
    std::vector<std::string> generator_names;  // size == rank
    std::string name = "custom";

    void validate() const;
    int num_bases() const { return seed.num_vertices; }
};

struct LatticeVertex {
    int base = 0;
    Cell cell;

    friend bool operator==(const LatticeVertex& a, const LatticeVertex& b) {
        return a.base == b.base && a.cell == b.cell;
    }
    friend bool operator<(const LatticeVertex& a, const LatticeVertex& b) {
        if (a.cell != b.cell) return a.cell < b.cell;
        return a.base < b.base;
    }
};

struct LatticeVertexHash {
    std::size_t operator()(const LatticeVertex& v) const;
};

// An edge instance of the infinite lattice: seed edge anchored at the
// origin's cell.
struct LatticeEdge {
    int seed_edge = 0;
    Cell anchor;

    friend bool operator==(const LatticeEdge& a, const LatticeEdge& b) {
        return a.seed_edge == b.seed_edge && a.anchor == b.anchor;
    }
    friend bool operator<(const LatticeEdge& a, const LatticeEdge& b) {
        if (a.anchor != b.anchor) return a.anchor < b.anchor;
        return a.seed_edge < b.seed_edge;
    }
};

LatticeVertex edge_origin(const PeriodicLattice& lat, const LatticeEdge& e);
LatticeVertex edge_target(const PeriodicLattice& lat, const LatticeEdge& e);
LatticeEdge edge_inverse(const PeriodicLattice& lat, const LatticeEdge& e);
std::vector<LatticeEdge> edges_at(const PeriodicLattice& lat, const LatticeVertex& v);

// Bounded BFS on the infinite lattice. Returns nullopt when the distance
// exceeds the limit.
std::optional<int> lattice_distance(const PeriodicLattice& lat, const LatticeVertex& a,
                                    const LatticeVertex& b, int limit);

std::vector<LatticeVertex> lattice_graph_ball(const PeriodicLattice& lat, const LatticeVertex& c, int r);

// The quotient graph of the block coordinate: cells of Z^d joined along
// the edge-orbit translation vectors.
class BlockGeometry {
  public:
    explicit BlockGeometry(const PeriodicLattice& lat);

    int dim() const { return d_; }
    bool unit_steps_only() const { return unit_steps_only_; }
    const std::vector<Cell>& steps() const { return steps_; }

    // Distance in the block quotient graph; nullopt if above limit.
    std::optional<int> distance(const Cell& a, const Cell& b, int limit) const;
    // Cells within block distance R of center.
    std::vector<Cell> ball(const Cell& center, int radius) const;

  private:
    int d_;
    std::vector<Cell> steps_;  // nonzero difference vectors, closed under negation
    bool unit_steps_only_;
};

// The stored presentation keeps vertices in block coordinates already.
inline const Cell& block_coordinate(const PeriodicLattice&, const LatticeVertex& v) { return v.cell; }

int block_distance(const PeriodicLattice& lat, const LatticeVertex& v, const LatticeVertex& w);
std::vector<LatticeVertex> block_ball(const PeriodicLattice& lat, const LatticeVertex& v, int radius);
int block_diameter(const PeriodicLattice& lat, const std::vector<LatticeVertex>& vs);

struct EEReport {
    bool ee_at_stored_coordinate = false;
    bool rank_certified = false;  // 1 - |X0| + |E0|/2 == rank
    int rank_formula_value = 0;
    std::optional<Cell> offending_translation;
};

EEReport is_essentially_euclidean(const PeriodicLattice& lat);

// Same vertex set, complete graph within each fundamental-domain copy plus
// all edges to generator-neighboring copies. Always essentially Euclidean.
PeriodicLattice essentially_euclidean_equivalent(const PeriodicLattice& lat);

struct EquivalenceConstants {
    int c = 1;        // d_X  <= c  * d_X'
    int c_prime = 1;  // d_X' <= c' * d_X
};

EquivalenceConstants equivalence_constants(const PeriodicLattice& a, const PeriodicLattice& b, int limit = 64);

PeriodicLattice builtin_lattice(const std::string& name, const std::vector<int>& params = {});

// Presentation of the maximal abelian cover of a seed crystal: spanning
// tree edges get translation zero, each cotree pair a +-standard basis
// vector. rank = 1 - |X0| + |E0|/2, which must be positive.
PeriodicLattice maximal_abelian_cover(const MultiGraph& seed);

struct CellBox {
    std::vector<std::pair<int, int>> range;  // inclusive per axis

    bool contains(const Cell& c) const;
    std::vector<Cell> cells() const;  // lexicographic
    int dim() const { return static_cast<int>(range.size()); }
};

// Finite realization of a lattice over a box of cells. Vertex ids are in
// lexicographic (cell, base) order; canonical_order is the traversal
// order used for normal forms, refined so that every suffix induces a
// connected subgraph.
struct FiniteWindow {
    std::shared_ptr<const PeriodicLattice> lat;
    CellBox box;

    std::vector<LatticeVertex> verts;
    std::unordered_map<LatticeVertex, int, LatticeVertexHash> vert_id;
    MultiGraph graph;
    std::vector<LatticeEdge> edge_instance;  // per window edge
    std::vector<int> canonical_order;        // k-th processed window id
    std::vector<int> order_pos;              // inverse of canonical_order
    std::vector<char> boundary;              // vertex has a lattice edge leaving the box

    int num_vertices() const { return static_cast<int>(verts.size()); }
    std::optional<int> id_of(const LatticeVertex& v) const;
    const LatticeVertex& vertex(int id) const { return verts.at(id); }
    bool contains(const LatticeVertex& v) const { return id_of(v).has_value(); }

    // Smallest block distance from v to a cell outside the box.
    int margin(const LatticeVertex& v) const;
};

FiniteWindow make_window(const PeriodicLattice& lat, const CellBox& box);

struct ComplementReport {
    int total_components = 0;
    int boundary_touching = 0;
    int enclosed = 0;
};

// Components of the window with a set of vertices removed. Throws
// InconclusiveError when the removed set is too close to the boundary for
// the count to reflect the infinite lattice.
ComplementReport complement_components(const FiniteWindow& w, const std::vector<int>& removed_ids);

// Finite torus realization (cells mod sizes) together with the translation
// generators, realized as permutations. Used to exercise quotients and
// coverings of group actions at finite scale.
struct TorusRealization {
    MultiGraph graph;
    std::vector<LatticeVertex> verts;
    std::vector<std::vector<int>> gen_vertex_maps;
    std::vector<std::vector<int>> gen_edge_maps;
};

TorusRealization torus_realization(const PeriodicLattice& lat, const std::vector<int>& sizes);

}  // namespace crystalforms
