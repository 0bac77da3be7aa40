#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <vector>

#include "crystalforms/crystal.hpp"
#include "crystalforms/interaction.hpp"

namespace crystalforms {

// Finitely supported configuration on the infinite lattice: sorted sparse
// list of sites holding a non-base state. Everything outside the support
// is at the base state, so equality of supports is equality of
// configurations.
struct Configuration {
    std::vector<std::pair<LatticeVertex, int>> sites;

    static Configuration of(std::vector<std::pair<LatticeVertex, int>> raw, int base);

    int state_at(const LatticeVertex& v, int base) const;
    Configuration with(const LatticeVertex& v, int state, int base) const;
    bool empty() const { return sites.empty(); }

    friend bool operator==(const Configuration& a, const Configuration& b) { return a.sites == b.sites; }
    friend bool operator!=(const Configuration& a, const Configuration& b) { return !(a == b); }
    friend bool operator<(const Configuration& a, const Configuration& b) { return a.sites < b.sites; }
};

struct ConfigurationHash {
    std::size_t operator()(const Configuration& c) const;
};

Configuration translate_configuration(const Configuration& c, const Cell& delta);

// Restriction eta|_Lambda: keep only sites inside Lambda.
Configuration restrict_configuration(const Configuration& c, const std::vector<LatticeVertex>& lambda);

// The transition (eta, e): origin eta, target eta^e.
struct Transition {
    Configuration config;
    LatticeEdge edge;
};

Configuration apply_edge(const PeriodicLattice& lat, const Interaction& in, const Configuration& eta,
                         const LatticeEdge& e);

Transition invert_transition(const PeriodicLattice& lat, const Interaction& in, const Transition& t);

Charge charge_of(const ChargeContext& ctx, const Configuration& eta);

// States of eta listed in the window's canonical vertex order.
std::vector<int> states_in_order(const FiniteWindow& w, const Configuration& eta, int base);

// BFS over the window's configuration graph. Returns the transition path
// from eta to target, nullopt when they are in different components, and
// throws CapError when the explored set exceeds the cap.
std::optional<std::vector<Transition>> component_reachability(const FiniteWindow& w, const Interaction& in,
                                                              const Configuration& eta,
                                                              const Configuration& target, long long cap);

struct SearchBudget {
    long long node_cap = 4'000'000;  // per realization search
    int initial_radius = 2;
};

// Canonical representatives and normal-form paths on a window.
//
// The representative of a charge class is its lexicographically least
// member in the window's canonical vertex order. The path from any
// configuration to its representative is built site by site: each vertex
// in order is set to the representative's state by a best-first search
// over transitions confined to the not-yet-fixed suffix (which the
// canonical order keeps connected), growing the search ball only as far
// as needed.
class Normalizer {
  public:
    Normalizer(const FiniteWindow& w, const Interaction& in, const ChargeContext& ctx,
               SearchBudget budget = {});

    const Configuration& representative(const Charge& c) const;

    // Transitions leading from eta to representative(charge(eta)).
    std::vector<Transition> normalize_path(const Configuration& eta) const;

    const FiniteWindow& window() const { return *w_; }

  private:
    const FiniteWindow* w_;
    const Interaction* in_;
    const ChargeContext* ctx_;
    SearchBudget budget_;
    bool base_pair_moves_;
    mutable std::map<Charge, Configuration> rep_cache_;

    int target_state(Charge& c_rem, int sites_after) const;
    std::vector<Transition> realize(Configuration& cur, int order_pos, int window_vid, int goal_state) const;
};

// Dense enumeration of the configuration space of a small finite locale.
// Used by exhaustive oracles (kernel computations, evidence checks).
struct DenseLocale {
    const MultiGraph* locale;
    const Interaction* inter;
    long long size = 0;

    DenseLocale(const MultiGraph& g, const Interaction& in, long long cap);

    long long encode(const std::vector<int>& states) const;
    std::vector<int> decode(long long idx) const;
    long long apply(long long idx, int edge) const;  // index of eta^e
};

}  // namespace crystalforms
