#include "crystalforms/decomposition.hpp"

#include <algorithm>
#include <set>

#include "crystalforms/linalg.hpp"

namespace crystalforms {

namespace {

Charge charge_sum(const Charge& a, const Charge& b) {
    Charge c(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) c[i] = a[i] + b[i];
    return c;
}

Rat xi_total(const ConservedQuantity& xi, const Configuration& eta) {
    Rat sum(0);
    for (const auto& [v, s] : eta.sites) sum += xi(s);
    return sum;
}

std::vector<Cell> l1_ball_cells(int d, const Cell& center, int radius) {
    std::vector<Cell> out;
    Cell c(d);
    std::function<void(int, int)> rec = [&](int axis, int budget) {
        if (axis == d) {
            out.push_back(cell_add(c, center));
            return;
        }
        for (int v = -budget; v <= budget; ++v) {
            c[axis] = v;
            rec(axis + 1, budget - (v < 0 ? -v : v));
        }
    };
    rec(0, radius);
    std::sort(out.begin(), out.end());
    return out;
}

int l1_vertex_distance(const LatticeVertex& a, const LatticeVertex& b) {
    return cell_l1(cell_sub(a.cell, b.cell));
}

}  // namespace

PairingEngine::PairingEngine(const System& sys, const FiniteWindow& w, FnEval f, int sep_radius)
    : sys_(&sys), w_(&w), f_(std::move(f)), sep_(sep_radius) {}

std::vector<LatticeVertex> PairingEngine::ball_vertices(const BallSpec& b) const {
    std::vector<LatticeVertex> out;
    for (const auto& c : l1_ball_cells(sys_->lattice.rank, b.center, b.radius)) {
        if (!w_->box.contains(c))
            throw InconclusiveError("pairing: ball at the canonical position leaves the window; enlarge it");
        for (int base = 0; base < sys_->lattice.num_bases(); ++base) out.push_back({base, c});
    }
    std::sort(out.begin(), out.end());
    return out;
}

Rat PairingEngine::pairing_local(const std::vector<LatticeVertex>& l1, const std::vector<LatticeVertex>& l2,
                                 const Configuration& eta) const {
    int sep = 1 << 20;
    for (const auto& a : l1)
        for (const auto& b : l2) sep = std::min(sep, l1_vertex_distance(a, b));
    if (sep <= sep_)
        throw InputError("pairing: regions are separated by " + std::to_string(sep) +
                         ", need more than " + std::to_string(sep_));
    std::vector<LatticeVertex> both = l1;
    both.insert(both.end(), l2.begin(), l2.end());
    std::sort(both.begin(), both.end());
    return f_(restrict_configuration(eta, both)) - f_(restrict_configuration(eta, l1)) -
           f_(restrict_configuration(eta, l2));
}

std::pair<BallSpec, BallSpec> PairingEngine::canonical_pair(int k, int variant) const {
    const int d = sys_->lattice.rank;
    int offset = 2 * sep_ + 2 * k + 2;
    Cell left(d, 0), right(d, 0);
    left[0] = -offset;
    right[0] = offset;
    BallSpec d1{left, k}, d2{right, k};
    switch (variant % 4) {
        case 0:
            break;
        case 1:
            d2.center[0] += 1;  // shift within the same complement component
            break;
        case 2:
            d1.radius += 1;  // larger admissible balls
            d2.radius += 1;
            break;
        case 3:
            std::swap(d1, d2);  // side-swapped pair
            break;
    }
    return {d1, d2};
}

int PairingEngine::min_particles(const Charge& a) const {
    auto k = sys_->charges.min_sites(a, 64);
    if (!k) throw InputError("pairing: charge is not realizable");
    return *k;
}

int PairingEngine::required_extent(int sep_radius, int k) { return 2 * sep_radius + 3 * k + 2; }

Configuration PairingEngine::realize_in_ball(const Charge& a, const BallSpec& ball) const {
    std::vector<LatticeVertex> verts = ball_vertices(ball);
    // Greedy in the window's canonical order.
    std::sort(verts.begin(), verts.end(), [&](const LatticeVertex& x, const LatticeVertex& y) {
        return w_->order_pos[*w_->id_of(x)] < w_->order_pos[*w_->id_of(y)];
    });
    const auto& ctx = sys_->charges;
    Charge rest = a;
    std::vector<std::pair<LatticeVertex, int>> raw;
    int m = static_cast<int>(verts.size());
    for (int i = 0; i < m; ++i) {
        bool placed = false;
        for (int s = 0; s < sys_->num_states(); ++s) {
            Charge next(rest.size());
            const Charge& sc = ctx.state_charge(s);
            for (std::size_t t = 0; t < rest.size(); ++t) next[t] = rest[t] - sc[t];
            if (ctx.realizable(next, m - i - 1)) {
                if (s != sys_->base()) raw.emplace_back(verts[i], s);
                rest = std::move(next);
                placed = true;
                break;
            }
        }
        if (!placed) throw InconclusiveError("pairing: charge not realizable inside the ball; enlarge it");
    }
    return Configuration::of(std::move(raw), sys_->base());
}

Rat PairingEngine::pairing(const Charge& a, const Charge& b, int k, int variant,
                           PairProvenance* prov) const {
    int ka = min_particles(a), kb = min_particles(b);
    if (k < 0) k = std::max(ka, kb);
    if (k < ka || k < kb) throw InputError("pairing: k below the minimal particle number of the charges");
    auto [d1, d2] = canonical_pair(k, variant);
    Configuration eta1 = realize_in_ball(a, d1);
    Configuration eta2 = realize_in_ball(b, d2);
    std::vector<std::pair<LatticeVertex, int>> merged(eta1.sites);
    merged.insert(merged.end(), eta2.sites.begin(), eta2.sites.end());
    Configuration eta12 = Configuration::of(std::move(merged), sys_->base());
    if (prov) *prov = {d1, d2};
    return f_(eta12) - f_(eta1) - f_(eta2);
}

PairingTable tabulate_pairing(const PairingEngine& engine, const ChargeContext& ctx, int site_budget) {
    PairingTable table;
    table.site_budget = site_budget;
    std::vector<Charge> domain = ctx.charges_up_to(site_budget);
    for (const auto& a : domain) {
        for (const auto& b : domain) {
            Charge sum = charge_sum(a, b);
            if (!ctx.realizable(sum, site_budget)) continue;
            PairProvenance prov;
            Rat value = engine.pairing(a, b, -1, 0, &prov);
            table.values.emplace(std::make_pair(a, b), value);
            table.provenance.emplace(std::make_pair(a, b), prov);
        }
    }
    return table;
}

Rat SplittingFunction::at(const Charge& c) const {
    auto it = values.find(c);
    if (it == values.end())
        throw InconclusiveError("splitting: charge outside the tabulated range; raise the site budget");
    return it->second;
}

namespace {

// Positive rational gcd of the nonzero entries.
Rat rational_gcd(const std::vector<Rat>& vals) {
    mpz_class num_gcd(0), den_lcm(1);
    for (const auto& v : vals) {
        if (v == 0) continue;
        mpz_gcd(num_gcd.get_mpz_t(), num_gcd.get_mpz_t(), v.get_num().get_mpz_t());
        mpz_lcm(den_lcm.get_mpz_t(), den_lcm.get_mpz_t(), v.get_den().get_mpz_t());
    }
    if (num_gcd == 0) throw InputError("splitting: no nonzero charge values");
    Rat g(num_gcd, den_lcm);
    g.canonicalize();
    if (g < 0) g = -g;
    return g;
}

}  // namespace

SplittingFunction split_cocycle(const PairingTable& table, MonoidKind kind, const ChargeContext& ctx) {
    SplittingFunction h;
    auto lookup = [&](const Charge& a, const Charge& b) -> const Rat& {
        auto it = table.values.find(std::make_pair(a, b));
        if (it == table.values.end())
            throw InconclusiveError("splitting: missing table entry; raise the site budget");
        return it->second;
    };

    if (kind == MonoidKind::MonoidN || kind == MonoidKind::MonoidZ) {
        if (ctx.c_phi() != 1) throw InputError("splitting: monoid construction needs c_phi == 1");
        std::vector<Rat> vals;
        for (int s = 0; s < ctx.interaction().num_states(); ++s) vals.push_back(ctx.state_charge(s)[0]);
        Rat gen_value = rational_gcd(vals);
        if (kind == MonoidKind::MonoidN) {
            bool has_pos = false, has_neg = false;
            for (const auto& v : vals) {
                if (v > 0) has_pos = true;
                if (v < 0) has_neg = true;
            }
            if (has_neg && !has_pos) gen_value = -gen_value;
            if (has_neg && has_pos) throw InputError("splitting: mixed signs need the MonoidZ case");
        }
        Charge gen{gen_value};
        Charge zero = ctx.zero();
        h.values[zero] = 0;
        std::set<Charge> domain;
        for (const auto& [key, value] : table.values) {
            domain.insert(key.first);
            domain.insert(key.second);
            domain.insert(charge_sum(key.first, key.second));
        }
        if (domain.count(gen)) h.values[gen] = 0;
        // Ascending recursion h(n+1) = h(n) + h(1) - H(n, 1).
        Charge cur = gen;
        while (h.values.count(cur)) {
            Charge next = charge_sum(cur, gen);
            if (!domain.count(next)) break;
            h.values[next] = h.values[cur] + h.values[gen] - lookup(cur, gen);
            cur = next;
        }
        if (kind == MonoidKind::MonoidZ) {
            Charge neg{-gen[0]};
            if (domain.count(neg)) {
                // 0 = h(gen) + h(-gen) - H(gen, -gen).
                h.values[neg] = lookup(gen, neg) - h.values[gen];
                cur = neg;
                while (h.values.count(cur)) {
                    Charge next = charge_sum(cur, neg);
                    if (!domain.count(next)) break;
                    h.values[next] = h.values[cur] + h.values[neg] - lookup(cur, neg);
                    cur = next;
                }
            }
        }
        for (const auto& [key, value] : table.values) {
            const auto& [a, b] = key;
            Charge sum = charge_sum(a, b);
            if (!h.values.count(a) || !h.values.count(b) || !h.values.count(sum))
                throw InconclusiveError("splitting: monoid recursion did not reach every tabulated charge");
            if (h.values[a] + h.values[b] - h.values[sum] != value)
                throw InputError("splitting: cocycle violated at (" + rat_to_string(a[0]) + ", " +
                                 rat_to_string(b[0]) + ")");
        }
        return h;
    }

    // Symmetric case: exact solve of the defining linear system.
    std::vector<Charge> unknowns;
    {
        std::set<Charge> dom;
        for (const auto& [key, value] : table.values) {
            dom.insert(key.first);
            dom.insert(key.second);
            dom.insert(charge_sum(key.first, key.second));
        }
        dom.insert(ctx.zero());
        unknowns.assign(dom.begin(), dom.end());
    }
    auto index_of = [&](const Charge& c) {
        auto it = std::lower_bound(unknowns.begin(), unknowns.end(), c);
        return static_cast<std::size_t>(it - unknowns.begin());
    };
    RatMat rows;
    RatVec rhs;
    {
        RatVec row(unknowns.size(), Rat(0));
        row[index_of(ctx.zero())] = 1;
        rows.push_back(row);
        rhs.push_back(Rat(0));
    }
    for (const auto& [key, value] : table.values) {
        RatVec row(unknowns.size(), Rat(0));
        row[index_of(key.first)] += 1;
        row[index_of(key.second)] += 1;
        row[index_of(charge_sum(key.first, key.second))] -= 1;
        rows.push_back(std::move(row));
        rhs.push_back(value);
    }
    auto solution = solve_linear(rows, rhs);
    if (!solution) {
        // Identify a witness for the report: symmetry first, then cocycle.
        for (const auto& [key, value] : table.values) {
            auto sym = table.values.find(std::make_pair(key.second, key.first));
            if (sym != table.values.end() && sym->second != value)
                throw InputError("splitting: pairing is not symmetric at a tabulated pair");
        }
        for (const auto& [key1, h_ab] : table.values) {
            const auto& [a, b] = key1;
            for (const auto& [key2, h_bc] : table.values) {
                if (key2.first != b) continue;
                const Charge& c = key2.second;
                auto ab_c = table.values.find(std::make_pair(charge_sum(a, b), c));
                auto a_bc = table.values.find(std::make_pair(a, charge_sum(b, c)));
                if (ab_c == table.values.end() || a_bc == table.values.end()) continue;
                if (h_ab + ab_c->second != h_bc + a_bc->second)
                    throw InputError("splitting: cocycle identity violated on a tabulated triple");
            }
        }
        throw InputError("splitting: defining linear system is inconsistent");
    }
    for (std::size_t i = 0; i < unknowns.size(); ++i) h.values[unknowns[i]] = (*solution)[i];
    for (const auto& [key, value] : table.values) {
        if (h.at(key.first) + h.at(key.second) - h.at(charge_sum(key.first, key.second)) != value)
            throw InternalError("splitting: solver produced a non-solution");
    }
    return h;
}

CorrectionResult correct_to_uniform(const System& sys, const FiniteWindow& w, const FnEval& f,
                                    int sep_radius, int site_budget) {
    CorrectionResult out;
    auto simple = is_simple(sys.interaction, sys.basis);
    if (sys.lattice.rank == 1 && !simple.simple)
        throw InputError("correct_to_uniform: dimension-1 lattices need a simple interaction (" +
                         simple.detail + ")");
    out.kind = sys.lattice.rank == 1
                   ? (simple.monoid_is_group ? MonoidKind::MonoidZ : MonoidKind::MonoidN)
                   : MonoidKind::SymmetricSystem;
    PairingEngine engine(sys, w, f, sep_radius);
    out.table_f = tabulate_pairing(engine, sys.charges, site_budget);
    out.h = split_cocycle(out.table_f, out.kind, sys.charges);
    SplittingFunction h_copy = out.h;
    const ChargeContext* ctx = &sys.charges;
    FnEval f_copy = f;
    out.g0 = [f_copy, h_copy, ctx](const Configuration& eta) -> Rat {
        return f_copy(eta) + h_copy.at(charge_of(*ctx, eta));
    };
    PairingEngine engine_g0(sys, w, out.g0, sep_radius);
    out.table_g0 = tabulate_pairing(engine_g0, sys.charges, site_budget);
    out.pairing_vanishes = true;
    for (const auto& [key, value] : out.table_g0.values)
        out.pairing_vanishes = out.pairing_vanishes && value == 0;
    return out;
}

std::optional<UniformityWitness> uniformity_check(const System& sys, const FiniteWindow& w, const FnEval& f,
                                                  int radius, const UniformityOptions& opts) {
    const auto& lat = sys.lattice;
    const int d = lat.rank;
    const int margin_required = d == 1 ? 2 * radius + 2 : 2 * radius;
    BlockGeometry geo(lat);

    // Candidate vertices around the origin cell with enough margin.
    std::vector<LatticeVertex> candidates;
    for (const auto& c : geo.ball(Cell(d, 0), opts.max_spread))
        for (int b = 0; b < lat.num_bases(); ++b) {
            LatticeVertex v{b, c};
            if (!w.contains(v)) continue;
            if (w.margin(v) < margin_required) continue;
            candidates.push_back(v);
        }
    std::sort(candidates.begin(), candidates.end());
    if (candidates.empty())
        throw InconclusiveError("uniformity_check: window margin below " + std::to_string(margin_required));

    // Lambda family: anchored pairs and triples within the spread.
    std::vector<std::vector<LatticeVertex>> lambdas;
    LatticeVertex origin{0, Cell(d, 0)};
    if (!w.contains(origin) || w.margin(origin) < margin_required)
        throw InconclusiveError("uniformity_check: origin cell lacks margin");
    for (const auto& v : candidates) {
        if (v == origin) continue;
        lambdas.push_back({origin, v});
    }
    if (opts.max_support >= 3) {
        for (const auto& v : candidates) {
            if (v == origin) continue;
            for (const auto& u : candidates) {
                if (u == origin || !(v < u)) continue;
                lambdas.push_back({origin, v, u});
            }
        }
    }

    const int num_states = sys.num_states();
    for (const auto& lambda_raw : lambdas) {
        std::vector<LatticeVertex> lambda = lambda_raw;
        std::sort(lambda.begin(), lambda.end());
        long long patterns = 1;
        for (std::size_t i = 0; i < lambda.size(); ++i) patterns *= num_states;
        if (patterns > opts.pattern_cap) continue;
        for (const auto& x : lambda) {
            // Block balls around x.
            std::set<Cell> ball0_cells, ballR_cells;
            for (const auto& c : geo.ball(x.cell, 0)) ball0_cells.insert(c);
            for (const auto& c : geo.ball(x.cell, radius)) ballR_cells.insert(c);
            std::vector<LatticeVertex> lam_minus_b0, lam_capR, lam_capRstar;
            for (const auto& v : lambda) {
                bool in0 = ball0_cells.count(v.cell) > 0;
                bool inR = ballR_cells.count(v.cell) > 0;
                if (!in0) lam_minus_b0.push_back(v);
                if (inR) lam_capR.push_back(v);
                if (inR && !in0) lam_capRstar.push_back(v);
            }
            for (long long idx = 0; idx < patterns; ++idx) {
                long long rest = idx;
                std::vector<std::pair<LatticeVertex, int>> raw;
                for (const auto& v : lambda) {
                    raw.emplace_back(v, static_cast<int>(rest % num_states));
                    rest /= num_states;
                }
                Configuration eta = Configuration::of(std::move(raw), sys.base());
                Rat lhs = iota_restrict(f, lambda, eta) - iota_restrict(f, lam_minus_b0, eta);
                Rat rhs = iota_restrict(f, lam_capR, eta) - iota_restrict(f, lam_capRstar, eta);
                if (lhs != rhs) return UniformityWitness{lambda, x, eta, lhs, rhs};
            }
        }
    }
    return std::nullopt;
}

Rat AFunction::evaluate(const Configuration& eta, int base) const {
    Rat sum(0);
    for (const auto& [v, s] : eta.sites) sum += Rat(v.cell[axis]) * xi(s);
    return sum;
}

FnEval AFunction::evaluator(int base) const {
    AFunction copy = *this;
    return [copy, base](const Configuration& eta) -> Rat { return copy.evaluate(eta, base); };
}

AFunction a_function(const System& sys, const ConservedQuantity& xi, int axis) {
    if (axis < 0 || axis >= sys.lattice.rank) throw InputError("a_function: axis out of range");
    return AFunction{xi, axis};
}

bool a_identity_check(const System& sys, const AFunction& a, int axis_k,
                      const std::vector<Configuration>& samples) {
    Cell unit(sys.lattice.rank, 0);
    unit[axis_k] = 1;
    for (const auto& eta : samples) {
        Rat lhs = a.evaluate(eta, sys.base()) - a.evaluate(translate_configuration(eta, cell_neg(unit)), sys.base());
        Rat rhs = a.axis == axis_k ? xi_total(a.xi, eta) : Rat(0);
        if (lhs != rhs) return false;
    }
    return true;
}

int dim_dV_rank(const System& sys, const FiniteWindow& w) {
    const auto& lat = sys.lattice;
    const int d = lat.rank;
    const int cphi = static_cast<int>(sys.basis.size());
    std::vector<AFunction> fams;
    for (int j = 0; j < d; ++j)
        for (int b = 0; b < cphi; ++b) fams.push_back(a_function(sys, sys.basis[b], j));
    RatMat rows;
    for (int e = 0; e < lat.seed.num_edges(); ++e) {
        LatticeEdge inst{e, Cell(d, 0)};
        LatticeVertex o = edge_origin(lat, inst), t = edge_target(lat, inst);
        if (!w.contains(o) || !w.contains(t)) continue;
        if (o == t) continue;
        for (int s1 = 0; s1 < sys.num_states(); ++s1) {
            for (int s2 = 0; s2 < sys.num_states(); ++s2) {
                Configuration eta =
                    Configuration::of({{o, s1}, {t, s2}}, sys.base());
                Configuration moved = apply_edge(lat, sys.interaction, eta, inst);
                if (moved == eta) continue;
                RatVec row;
                for (const auto& a : fams)
                    row.push_back(a.evaluate(moved, sys.base()) - a.evaluate(eta, sys.base()));
                rows.push_back(std::move(row));
            }
        }
    }
    if (rows.empty()) throw InconclusiveError("dim_dV_rank: no usable transition in the window");
    return static_cast<int>(rank_of(std::move(rows)));
}

std::vector<Configuration> sample_configurations(const System& sys, const FiniteWindow& w, int max_particles,
                                                 int region_radius, std::mt19937_64& rng, int count) {
    BlockGeometry geo(sys.lattice);
    std::vector<LatticeVertex> region;
    for (const auto& c : geo.ball(Cell(sys.lattice.rank, 0), region_radius))
        for (int b = 0; b < sys.lattice.num_bases(); ++b) {
            LatticeVertex v{b, c};
            if (w.contains(v)) region.push_back(v);
        }
    std::sort(region.begin(), region.end());
    if (region.empty()) throw InconclusiveError("sample_configurations: empty region");
    std::vector<int> non_base;
    for (int s = 0; s < sys.num_states(); ++s)
        if (s != sys.base()) non_base.push_back(s);
    std::vector<Configuration> out;
    std::set<Configuration> seen;
    int attempts = 0;
    while (static_cast<int>(out.size()) < count && attempts < count * 20) {
        ++attempts;
        int particles = static_cast<int>(rng() % (max_particles + 1));
        std::vector<std::pair<LatticeVertex, int>> raw;
        std::set<std::size_t> used;
        for (int p = 0; p < particles; ++p) {
            std::size_t site = rng() % region.size();
            if (used.count(site)) continue;
            used.insert(site);
            raw.emplace_back(region[site], non_base[rng() % non_base.size()]);
        }
        Configuration cfg = Configuration::of(std::move(raw), sys.base());
        if (seen.insert(cfg).second) out.push_back(std::move(cfg));
    }
    return out;
}

std::vector<Transition> sample_transitions(const System& sys, const FiniteWindow& w, int max_particles,
                                           int region_radius, std::mt19937_64& rng, int count) {
    auto configs = sample_configurations(sys, w, max_particles, region_radius + 1, rng, count);
    std::vector<Transition> out;
    const auto& lat = sys.lattice;
    BlockGeometry geo(lat);
    auto anchors = geo.ball(Cell(lat.rank, 0), region_radius);
    for (const auto& cfg : configs) {
        // Pick a deterministic pseudo-random seed edge instance near the origin.
        int e = static_cast<int>(rng() % lat.seed.num_edges());
        const Cell& anchor = anchors[rng() % anchors.size()];
        LatticeEdge inst{e, anchor};
        if (!w.contains(edge_origin(lat, inst)) || !w.contains(edge_target(lat, inst))) continue;
        out.push_back({cfg, inst});
    }
    return out;
}

// Anchored supports of block diameter <= radius: subsets of the l1 ball
// around the origin whose least vertex sits in cell 0.
std::vector<std::vector<LatticeVertex>> anchored_supports(const PeriodicLattice& lat, int radius,
                                                          int max_size) {
    std::vector<LatticeVertex> candidates;
    for (const auto& c : l1_ball_cells(lat.rank, Cell(lat.rank, 0), radius))
        for (int b = 0; b < lat.num_bases(); ++b) {
            if (c < Cell(lat.rank, 0)) continue;  // least vertex must be in cell 0
            candidates.push_back({b, c});
        }
    std::sort(candidates.begin(), candidates.end());
    std::vector<std::vector<LatticeVertex>> out;
    std::vector<LatticeVertex> current;
    std::function<void(std::size_t)> rec = [&](std::size_t next) {
        if (!current.empty() && current.front().cell == Cell(lat.rank, 0)) out.push_back(current);
        if (static_cast<int>(current.size()) >= max_size) return;
        for (std::size_t i = next; i < candidates.size(); ++i) {
            bool ok = true;
            for (const auto& v : current)
                if (l1_vertex_distance(v, candidates[i]) > radius) {
                    ok = false;
                    break;
                }
            if (!ok) continue;
            current.push_back(candidates[i]);
            rec(i + 1);
            current.pop_back();
        }
    };
    rec(0);
    std::sort(out.begin(), out.end());
    return out;
}

namespace {

// The expansion piece for exactly this support, via inclusion-exclusion
// with a shared evaluation memo.
LocalFunction expansion_piece(const FnEval& f, const std::vector<LatticeVertex>& lambda, int num_states,
                              int base, std::map<Configuration, Rat>& memo) {
    auto value = [&](const Configuration& c) {
        auto it = memo.find(c);
        if (it != memo.end()) return it->second;
        Rat v = f(c);
        memo.emplace(c, v);
        return v;
    };
    LocalFunction piece;
    piece.support = lambda;
    piece.vanishing = true;
    std::vector<int> non_base;
    for (int s = 0; s < num_states; ++s)
        if (s != base) non_base.push_back(s);
    const std::size_t m = lambda.size();
    std::vector<std::size_t> digit(m, 0);
    while (true) {
        std::vector<int> states(m);
        for (std::size_t i = 0; i < m; ++i) states[i] = non_base[digit[i]];
        Rat coeff(0);
        for (std::uint64_t inner = 0; inner < (1ULL << m); ++inner) {
            std::vector<std::pair<LatticeVertex, int>> raw;
            int pop = 0;
            for (std::size_t i = 0; i < m; ++i)
                if (inner & (1ULL << i)) {
                    raw.emplace_back(lambda[i], states[i]);
                    ++pop;
                }
            Rat v = value(Configuration::of(std::move(raw), base));
            if ((static_cast<int>(m) - pop) % 2 == 0)
                coeff += v;
            else
                coeff -= v;
        }
        if (coeff != 0) piece.table.emplace(states, coeff);
        std::size_t i = 0;
        for (; i < m; ++i) {
            if (++digit[i] < non_base.size()) break;
            digit[i] = 0;
        }
        if (i == m) break;
    }
    return piece;
}

std::vector<Configuration> region_configurations(const std::vector<LatticeVertex>& region, int max_particles,
                                                 int num_states, int base, long long cap) {
    std::vector<int> non_base;
    for (int s = 0; s < num_states; ++s)
        if (s != base) non_base.push_back(s);
    std::vector<Configuration> out;
    std::vector<std::pair<LatticeVertex, int>> current;
    std::function<void(std::size_t)> rec = [&](std::size_t next) {
        out.push_back(Configuration::of(current, base));
        if (static_cast<long long>(out.size()) > cap)
            throw CapError("certificate: configuration family above the cap");
        if (static_cast<int>(current.size()) >= max_particles) return;
        for (std::size_t i = next; i < region.size(); ++i) {
            for (int s : non_base) {
                current.emplace_back(region[i], s);
                rec(i + 1);
                current.pop_back();
            }
        }
    };
    rec(0);
    return out;
}

}  // namespace

CellBox recommended_box(const System& sys, int form_radius, const DecomposeOptions& opts) {
    auto ee = is_essentially_euclidean(sys.lattice);
    int sep = form_radius;
    if (!ee.ee_at_stored_coordinate) {
        auto eq = essentially_euclidean_equivalent(sys.lattice);
        sep = equivalence_constants(sys.lattice, eq).c_prime * form_radius;
    }
    auto supports = anchored_supports(sys.lattice, opts.expand_radius >= 0 ? opts.expand_radius : sep, 8);
    int max_support = 1;
    for (const auto& s : supports) max_support = std::max(max_support, static_cast<int>(s.size()));
    int k = std::max({opts.charge_sites, max_support, opts.certificate_max_particles});
    int extent = PairingEngine::required_extent(sep, k) + 1;
    int side = k + sep + 2;
    CellBox box;
    box.range.push_back({-extent, extent});
    for (int j = 1; j < sys.lattice.rank; ++j) box.range.push_back({-side, side});
    return box;
}

DecompositionResult decompose(const System& sys, const Form& omega, const FiniteWindow& w,
                              const DecomposeOptions& opts) {
    DecompositionResult res;
    const auto& lat = sys.lattice;
    const int d = lat.rank;
    const int R = omega.radius();
    std::mt19937_64 rng(opts.rng_seed);

    res.window_box = w.box;
    for (int b = 0; b < lat.num_bases(); ++b) res.fundamental_domain.push_back(b);

    // Reduce to an essentially Euclidean coordinate when needed.
    auto ee = is_essentially_euclidean(lat);
    int sep = R;
    if (!ee.ee_at_stored_coordinate) {
        auto eq = essentially_euclidean_equivalent(lat);
        res.transport = equivalence_constants(lat, eq);
        sep = res.transport.c_prime * R;
        res.used_ee_equivalent = true;
    }
    res.separation_radius = sep;

    auto simple = is_simple(sys.interaction, sys.basis);
    if (d == 1 && !simple.simple)
        throw InputError("decompose: dimension-1 lattices need a simple interaction (" + simple.detail + ")");

    auto shift_samples = sample_transitions(sys, w, std::min(2, opts.certificate_max_particles), 1, rng, 24);
    auto srep = is_shift_invariant(omega, sys, shift_samples);
    if (!srep.invariant) throw InputError("decompose: the form is not shift-invariant on sampled transitions");

    // Site budget: the splitting must cover every charge the pipeline
    // evaluates (pairing realizations, certificate configs, expansion
    // patterns).
    int exp_radius = opts.expand_radius >= 0 ? opts.expand_radius : sep;
    auto supports = opts.expand_output ? anchored_supports(lat, exp_radius, 8)
                                       : std::vector<std::vector<LatticeVertex>>{};
    int max_support = 1;
    for (const auto& s : supports) max_support = std::max(max_support, static_cast<int>(s.size()));
    int site_budget = std::max({opts.charge_sites, max_support, opts.certificate_max_particles});
    res.charge_sites = site_budget;

    {
        int need = PairingEngine::required_extent(sep, site_budget);
        if (w.box.range[0].first > -need || w.box.range[0].second < need)
            throw InconclusiveError("decompose: window extent along the first axis below " +
                                    std::to_string(need) + " cells");
    }

    // The potential is shared by the result's evaluator closures, which
    // may outlive this frame.
    auto f_owned = std::make_shared<Potential>(sys, w, omega, opts.search);
    Potential& f = *f_owned;

    // zeta^(j)(s) = ((1 - sigma_j) f)(single-site probe): the splitting
    // summand cancels because translation preserves the charge.
    for (int j = 0; j < d; ++j) {
        Cell unit(d, 0);
        unit[j] = 1;
        ConservedQuantity zeta{RatVec(sys.num_states(), Rat(0))};
        for (int s = 0; s < sys.num_states(); ++s) {
            if (s == sys.base()) continue;
            Configuration probe = Configuration::of({{LatticeVertex{0, Cell(d, 0)}, s}}, sys.base());
            zeta.values[s] = f(probe) - f(translate_configuration(probe, cell_neg(unit)));
        }
        // Membership in Consv(S): the defining constraints themselves.
        for (int s1 = 0; s1 < sys.num_states(); ++s1)
            for (int s2 = 0; s2 < sys.num_states(); ++s2) {
                auto [a, b] = sys.interaction.apply(s1, s2);
                if (zeta.values[s1] + zeta.values[s2] != zeta.values[a] + zeta.values[b])
                    throw InternalError("decompose: extracted zeta is not a conserved quantity");
            }
        res.zetas.push_back(std::move(zeta));
    }

    // Pairing of f, then the splitting h and the corrected g0 = f + h(xi).
    FnEval f_eval = [f_owned](const Configuration& eta) -> Rat { return (*f_owned)(eta); };
    CorrectionResult corr = correct_to_uniform(sys, w, f_eval, sep, site_budget);
    res.table_f = std::move(corr.table_f);
    res.split_kind = corr.kind;
    res.h = std::move(corr.h);
    FnEval g0 = std::move(corr.g0);
    res.table_g0 = std::move(corr.table_g0);
    res.pairing_of_g_vanishes = corr.pairing_vanishes;

    std::vector<AFunction> afuns;
    for (int j = 0; j < d; ++j) afuns.push_back(a_function(sys, res.zetas[j], j));
    int base = sys.base();
    FnEval g_eval = [g0, afuns, base](const Configuration& eta) -> Rat {
        Rat v = g0(eta);
        for (const auto& a : afuns) v -= a.evaluate(eta, base);
        return v;
    };
    res.g_eval = g_eval;

    // Shift invariance of g on samples (translates keep charge and stay
    // inside the splitting domain).
    {
        res.g_shift_invariant = true;
        auto samples = sample_configurations(sys, w, site_budget, 1, rng, 16);
        for (int b = 0; b < lat.num_bases(); ++b)
            for (int s = 0; s < sys.num_states(); ++s) {
                if (s == sys.base()) continue;
                samples.push_back(Configuration::of({{LatticeVertex{b, Cell(d, 0)}, s}}, sys.base()));
            }
        for (int j = 0; j < d && res.g_shift_invariant; ++j) {
            Cell unit(d, 0);
            unit[j] = 1;
            for (const auto& eta : samples) {
                Configuration shifted = translate_configuration(eta, cell_neg(unit));
                bool inside = true;
                for (const auto& [v, st] : shifted.sites) inside = inside && w.contains(v);
                for (const auto& [v, st] : eta.sites) inside = inside && w.contains(v);
                if (!inside) continue;
                if (g_eval(eta) != g_eval(shifted)) {
                    res.g_shift_invariant = false;
                    break;
                }
            }
        }
    }

    // Orbit-data expansion of g.
    if (opts.expand_output) {
        std::map<Configuration, Rat> memo;
        res.g_orbit.shift_invariant = true;
        res.g_orbit.block_metric = true;
        res.g_orbit.radius = exp_radius;
        for (const auto& lambda : supports) {
            LocalFunction piece = expansion_piece(g_eval, lambda, sys.num_states(), sys.base(), memo);
            if (!piece.table.empty()) res.g_orbit.terms.push_back(std::move(piece));
        }
        res.expansion_consistent = true;
        auto samples = sample_configurations(sys, w, std::min(site_budget, 3), 1, rng, 12);
        for (const auto& eta : samples) {
            if (res.g_orbit.evaluate(eta, sys.base()) != g_eval(eta)) {
                res.expansion_consistent = false;
                break;
            }
        }
    }

    // Certificate: omega(phi) = del g(phi) + sum_j del A^j(phi) on every
    // transition of the local families around each seed edge.
    res.certificate_ok = true;
    for (int e = 0; e < lat.seed.num_edges(); ++e) {
        LatticeEdge inst{e, Cell(d, 0)};
        LatticeVertex o = edge_origin(lat, inst), t = edge_target(lat, inst);
        std::vector<LatticeVertex> region = lattice_graph_ball(lat, o, opts.certificate_radius);
        for (const auto& v : lattice_graph_ball(lat, t, opts.certificate_radius)) region.push_back(v);
        std::sort(region.begin(), region.end());
        region.erase(std::unique(region.begin(), region.end()), region.end());
        bool in_window = true;
        for (const auto& v : region) in_window = in_window && w.contains(v);
        if (!in_window) throw InconclusiveError("decompose: certificate region leaves the window");
        for (const auto& eta :
             region_configurations(region, opts.certificate_max_particles, sys.num_states(), sys.base(),
                                   opts.pattern_cap)) {
            Configuration moved = apply_edge(lat, sys.interaction, eta, inst);
            Rat lhs = omega(eta, inst);
            Rat rhs = g_eval(moved) - g_eval(eta);
            for (const auto& a : afuns) rhs += a.evaluate(moved, base) - a.evaluate(eta, base);
            Rat residual = lhs - rhs;
            res.certificate.push_back({Transition{eta, inst}, residual});
            res.certificate_ok = res.certificate_ok && residual == 0;
        }
    }
    return res;
}

}  // namespace crystalforms
