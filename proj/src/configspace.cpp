#include "crystalforms/configspace.hpp"

#include <algorithm>
#include <queue>
#include <set>
#include <unordered_map>
#include <unordered_set>

namespace crystalforms {

Configuration Configuration::of(std::vector<std::pair<LatticeVertex, int>> raw, int base) {
    std::sort(raw.begin(), raw.end());
    Configuration c;
    for (auto& [v, s] : raw) {
        if (s == base) continue;
        if (!c.sites.empty() && c.sites.back().first == v)
            throw InputError("configuration: duplicate site");
        c.sites.emplace_back(v, s);
    }
    return c;
}

int Configuration::state_at(const LatticeVertex& v, int base) const {
    auto it = std::lower_bound(sites.begin(), sites.end(), std::make_pair(v, 0),
                               [](const auto& a, const auto& b) { return a.first < b.first; });
    if (it != sites.end() && it->first == v) return it->second;
    return base;
}

Configuration Configuration::with(const LatticeVertex& v, int state, int base) const {
    Configuration out;
    out.sites.reserve(sites.size() + 1);
    bool placed = false;
    for (const auto& [w, s] : sites) {
        if (w == v) {
            placed = true;
            if (state != base) out.sites.emplace_back(v, state);
            continue;
        }
        if (!placed && v < w && state != base) {
            out.sites.emplace_back(v, state);
            placed = true;
        }
        out.sites.emplace_back(w, s);
    }
    if (!placed && state != base) out.sites.emplace_back(v, state);
    return out;
}

std::size_t ConfigurationHash::operator()(const Configuration& c) const {
    std::size_t h = 0x243f6a8885a308d3ULL;
    LatticeVertexHash vh;
    for (const auto& [v, s] : c.sites) {
        h = hash_combine(h, vh(v));
        h = hash_combine(h, static_cast<std::size_t>(s));
    }
    return h;
}

Configuration translate_configuration(const Configuration& c, const Cell& delta) {
    Configuration out;
    out.sites.reserve(c.sites.size());
    for (const auto& [v, s] : c.sites) out.sites.emplace_back(LatticeVertex{v.base, cell_add(v.cell, delta)}, s);
    std::sort(out.sites.begin(), out.sites.end());
    return out;
}

Configuration restrict_configuration(const Configuration& c, const std::vector<LatticeVertex>& lambda) {
    std::set<LatticeVertex> keep(lambda.begin(), lambda.end());
    Configuration out;
    for (const auto& site : c.sites)
        if (keep.count(site.first)) out.sites.push_back(site);
    return out;
}

Configuration apply_edge(const PeriodicLattice& lat, const Interaction& in, const Configuration& eta,
                         const LatticeEdge& e) {
    LatticeVertex o = edge_origin(lat, e);
    LatticeVertex t = edge_target(lat, e);
    if (o == t) return eta;  // loops are fixed points
    int s1 = eta.state_at(o, in.base);
    int s2 = eta.state_at(t, in.base);
    auto [a, b] = in.apply(s1, s2);
    if (a == s1 && b == s2) return eta;
    return eta.with(o, a, in.base).with(t, b, in.base);
}

Transition invert_transition(const PeriodicLattice& lat, const Interaction& in, const Transition& t) {
    Configuration moved = apply_edge(lat, in, t.config, t.edge);
    if (moved == t.config) return t;
    return {moved, edge_inverse(lat, t.edge)};
}

Charge charge_of(const ChargeContext& ctx, const Configuration& eta) {
    Charge c = ctx.zero();
    for (const auto& [v, s] : eta.sites) {
        const Charge& sc = ctx.state_charge(s);
        for (std::size_t i = 0; i < c.size(); ++i) c[i] += sc[i];
    }
    return c;
}

std::vector<int> states_in_order(const FiniteWindow& w, const Configuration& eta, int base) {
    std::vector<int> states(w.num_vertices(), base);
    for (const auto& [v, s] : eta.sites) {
        auto id = w.id_of(v);
        if (!id) throw InputError("configuration is not supported in the window");
        states[w.order_pos[*id]] = s;
    }
    return states;
}

namespace {

// Candidate moving edges touching the support (plus every window edge when
// the base-base pair itself moves).
std::vector<LatticeEdge> candidate_edges(const PeriodicLattice& lat, const Interaction& in,
                                         const Configuration& eta, bool base_pair_moves,
                                         const FiniteWindow& w) {
    std::vector<LatticeEdge> out;
    if (base_pair_moves) {
        out = w.edge_instance;
        return out;
    }
    for (const auto& [v, s] : eta.sites) {
        for (const auto& e : edges_at(lat, v)) {
            out.push_back(e);
            out.push_back(edge_inverse(lat, e));
        }
    }
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

}  // namespace

std::optional<std::vector<Transition>> component_reachability(const FiniteWindow& w, const Interaction& in,
                                                              const Configuration& eta,
                                                              const Configuration& target, long long cap) {
    const PeriodicLattice& lat = *w.lat;
    for (const auto& [v, s] : eta.sites)
        if (!w.contains(v)) throw InputError("component_reachability: source not supported in window");
    for (const auto& [v, s] : target.sites)
        if (!w.contains(v)) throw InputError("component_reachability: target not supported in window");
    if (eta == target) return std::vector<Transition>{};
    bool base_pair_moves = !in.fixes(in.base, in.base);

    std::vector<Configuration> nodes{eta};
    std::vector<std::pair<int, LatticeEdge>> parent{{-1, LatticeEdge{}}};
    std::unordered_map<Configuration, int, ConfigurationHash> seen;
    seen.emplace(eta, 0);
    std::queue<int> bfs;
    bfs.push(0);
    while (!bfs.empty()) {
        int cur = bfs.front();
        bfs.pop();
        Configuration cfg = nodes[cur];
        for (const auto& e : candidate_edges(lat, in, cfg, base_pair_moves, w)) {
            auto tid = w.id_of(edge_target(lat, e));
            auto oid = w.id_of(edge_origin(lat, e));
            if (!tid || !oid) continue;
            Configuration next = apply_edge(lat, in, cfg, e);
            if (next == cfg) continue;
            if (seen.count(next)) continue;
            int idx = static_cast<int>(nodes.size());
            if (idx > cap)
                throw CapError("component_reachability: explored more than " + std::to_string(cap) +
                               " configurations");
            nodes.push_back(next);
            parent.push_back({cur, e});
            seen.emplace(next, idx);
            if (next == target) {
                std::vector<Transition> path;
                int at = idx;
                while (parent[at].first != -1) {
                    path.push_back({nodes[parent[at].first], parent[at].second});
                    at = parent[at].first;
                }
                std::reverse(path.begin(), path.end());
                return path;
            }
            bfs.push(idx);
        }
    }
    return std::nullopt;
}

Normalizer::Normalizer(const FiniteWindow& w, const Interaction& in, const ChargeContext& ctx,
                       SearchBudget budget)
    : w_(&w), in_(&in), ctx_(&ctx), budget_(budget), base_pair_moves_(!in.fixes(in.base, in.base)) {}

int Normalizer::target_state(Charge& c_rem, int sites_after) const {
    for (int s = 0; s < in_->num_states(); ++s) {
        const Charge& sc = ctx_->state_charge(s);
        Charge rest(c_rem.size());
        for (std::size_t i = 0; i < rest.size(); ++i) rest[i] = c_rem[i] - sc[i];
        if (ctx_->realizable(rest, sites_after)) {
            c_rem = std::move(rest);
            return s;
        }
    }
    throw InternalError("normalizer: remaining charge not realizable on the suffix");
}

const Configuration& Normalizer::representative(const Charge& c) const {
    auto it = rep_cache_.find(c);
    if (it != rep_cache_.end()) return it->second;
    const int n = w_->num_vertices();
    if (!ctx_->realizable(c, n)) throw InputError("normalizer: charge not realizable in the window");
    Charge c_rem = c;
    std::vector<std::pair<LatticeVertex, int>> raw;
    for (int k = 0; k < n; ++k) {
        int vid = w_->canonical_order[k];
        int s = target_state(c_rem, n - k - 1);
        if (s != in_->base) raw.emplace_back(w_->vertex(vid), s);
    }
    return rep_cache_.emplace(c, Configuration::of(std::move(raw), in_->base)).first->second;
}

namespace {

struct SearchNode {
    long long priority;
    long long seq;
    int idx;
    friend bool operator>(const SearchNode& a, const SearchNode& b) {
        if (a.priority != b.priority) return a.priority > b.priority;
        return a.seq > b.seq;
    }
};

}  // namespace

std::vector<Transition> Normalizer::realize(Configuration& cur, int order_pos, int window_vid,
                                            int goal_state) const {
    const PeriodicLattice& lat = *w_->lat;
    const LatticeVertex x = w_->vertex(window_vid);
    const int n = w_->num_vertices();
    const int base = in_->base;

    // Suffix of the canonical order: the only vertices still free to move.
    std::vector<char> in_suffix(n, 0);
    for (int k = order_pos; k < n; ++k) in_suffix[w_->canonical_order[k]] = 1;

    auto heuristic = [&](const Configuration& cfg) -> long long {
        if (cfg.state_at(x, base) == goal_state) return 0;
        long long best = 1 << 20;
        if (goal_state != base) {
            for (const auto& [v, s] : cfg.sites) {
                auto id = w_->id_of(v);
                if (!id || !in_suffix[*id] || v == x) continue;
                best = std::min(best, static_cast<long long>(cell_l1(cell_sub(v.cell, x.cell))));
            }
        } else {
            best = 1;  // dumping charge: any direction is as good as another
        }
        return 1 + best;
    };

    for (int radius = budget_.initial_radius;; radius *= 2) {
        // Allowed region: suffix vertices within the block ball around x.
        std::vector<char> allowed(n, 0);
        int allowed_count = 0, suffix_count = 0;
        BlockGeometry geo(lat);
        std::set<Cell> ball_cells;
        for (const auto& c : geo.ball(x.cell, radius)) ball_cells.insert(c);
        for (int vid = 0; vid < n; ++vid) {
            if (!in_suffix[vid]) continue;
            ++suffix_count;
            if (ball_cells.count(w_->vertex(vid).cell)) {
                allowed[vid] = 1;
                ++allowed_count;
            }
        }
        bool covers_suffix = allowed_count == suffix_count;

        std::vector<Configuration> nodes{cur};
        std::vector<std::pair<int, LatticeEdge>> parent{{-1, LatticeEdge{}}};
        std::unordered_map<Configuration, int, ConfigurationHash> seen;
        seen.emplace(cur, 0);
        std::priority_queue<SearchNode, std::vector<SearchNode>, std::greater<SearchNode>> pq;
        long long seq = 0;
        pq.push({heuristic(cur), seq++, 0});
        int found = -1;
        while (!pq.empty() && found == -1) {
            auto [prio, sq, idx] = pq.top();
            pq.pop();
            Configuration cfg = nodes[idx];
            for (const auto& e : candidate_edges(lat, *in_, cfg, base_pair_moves_, *w_)) {
                auto oid = w_->id_of(edge_origin(lat, e));
                auto tid = w_->id_of(edge_target(lat, e));
                if (!oid || !tid || !allowed[*oid] || !allowed[*tid]) continue;
                Configuration next = apply_edge(lat, *in_, cfg, e);
                if (next == cfg || seen.count(next)) continue;
                int nidx = static_cast<int>(nodes.size());
                if (nidx > budget_.node_cap)
                    throw CapError("normalizer: search exceeded the node cap of " +
                                   std::to_string(budget_.node_cap));
                nodes.push_back(next);
                parent.push_back({idx, e});
                seen.emplace(next, nidx);
                if (next.state_at(x, base) == goal_state) {
                    found = nidx;
                    break;
                }
                pq.push({heuristic(next), seq++, nidx});
            }
        }
        if (found != -1) {
            std::vector<Transition> path;
            int at = found;
            while (parent[at].first != -1) {
                path.push_back({nodes[parent[at].first], parent[at].second});
                at = parent[at].first;
            }
            std::reverse(path.begin(), path.end());
            cur = nodes[found];
            return path;
        }
        if (covers_suffix)
            throw InternalError(
                "normalizer: target state unreachable on the remaining region; the interaction is not "
                "irreducibly quantified there");
    }
}

std::vector<Transition> Normalizer::normalize_path(const Configuration& eta) const {
    for (const auto& [v, s] : eta.sites)
        if (!w_->contains(v)) throw InputError("normalizer: configuration not supported in the window");
    const int n = w_->num_vertices();
    Charge c_rem = charge_of(*ctx_, eta);
    if (!ctx_->realizable(c_rem, n)) throw InputError("normalizer: charge not realizable in the window");
    Configuration cur = eta;
    std::vector<Transition> path;
    for (int k = 0; k < n; ++k) {
        int vid = w_->canonical_order[k];
        int goal = target_state(c_rem, n - k - 1);
        if (cur.state_at(w_->vertex(vid), in_->base) != goal) {
            auto steps = realize(cur, k, vid, goal);
            path.insert(path.end(), steps.begin(), steps.end());
        }
    }
    if (cur != representative(charge_of(*ctx_, eta)))
        throw InternalError("normalizer: normal form does not match the representative");
    return path;
}

DenseLocale::DenseLocale(const MultiGraph& g, const Interaction& in, long long cap)
    : locale(&g), inter(&in) {
    size = 1;
    for (int i = 0; i < g.num_vertices; ++i) {
        size *= in.num_states();
        if (size > cap)
            throw CapError("dense locale: about " + std::to_string(size) + "+ configurations, cap " +
                           std::to_string(cap));
    }
}

long long DenseLocale::encode(const std::vector<int>& states) const {
    long long idx = 0;
    for (int i = 0; i < locale->num_vertices; ++i) idx = idx * inter->num_states() + states[i];
    return idx;
}

std::vector<int> DenseLocale::decode(long long idx) const {
    std::vector<int> states(locale->num_vertices);
    for (int i = locale->num_vertices - 1; i >= 0; --i) {
        states[i] = static_cast<int>(idx % inter->num_states());
        idx /= inter->num_states();
    }
    return states;
}

long long DenseLocale::apply(long long idx, int edge) const {
    int o = locale->origin[edge], t = locale->target[edge];
    if (o == t) return idx;
    auto states = decode(idx);
    auto [a, b] = inter->apply(states[o], states[t]);
    states[o] = a;
    states[t] = b;
    return encode(states);
}

}  // namespace crystalforms
