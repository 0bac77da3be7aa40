#include "crystalforms/interaction.hpp"

#include <algorithm>
#include <numeric>
#include <thread>

#include "crystalforms/linalg.hpp"

namespace crystalforms {

int Interaction::state_index(const std::string& name) const {
    for (int s = 0; s < num_states(); ++s)
        if (state_names[s] == name) return s;
    throw InputError("unknown state '" + name + "'");
}

std::vector<InteractionViolation> validate_interaction(const Interaction& in) {
    std::vector<InteractionViolation> out;
    const int n = in.num_states();
    if (n == 0) {
        out.push_back({0, 0, "empty state set"});
        return out;
    }
    if (in.base < 0 || in.base >= n) {
        out.push_back({0, 0, "base state index out of range"});
        return out;
    }
    if (static_cast<int>(in.table.size()) != n * n) {
        out.push_back({0, 0, "transition table is not total on S x S"});
        return out;
    }
    for (int s1 = 0; s1 < n; ++s1) {
        for (int s2 = 0; s2 < n; ++s2) {
            auto [a, b] = in.apply(s1, s2);
            if (a < 0 || a >= n || b < 0 || b >= n) {
                out.push_back({s1, s2, "table value out of range"});
                continue;
            }
            if (a == s1 && b == s2) continue;
            // conj(phi)(a, b) = swap(phi(b, a)) must return (s1, s2).
            auto [c, d] = in.apply(b, a);
            if (d != s1 || c != s2)
                out.push_back({s1, s2,
                               "symmetry violated: phi(" + in.state_names[s1] + "," + in.state_names[s2] +
                                   ") is not undone by the conjugate map"});
        }
    }
    return out;
}

std::vector<ConservedQuantity> conserved_basis(const Interaction& in) {
    auto violations = validate_interaction(in);
    if (!violations.empty()) throw InputError("conserved_basis: interaction invalid: " + violations.front().message);
    const int n = in.num_states();
    RatMat rows;
    {
        RatVec base_row(n, Rat(0));
        base_row[in.base] = 1;
        rows.push_back(base_row);
    }
    for (int s1 = 0; s1 < n; ++s1) {
        for (int s2 = 0; s2 < n; ++s2) {
            auto [a, b] = in.apply(s1, s2);
            RatVec row(n, Rat(0));
            row[s1] += 1;
            row[s2] += 1;
            row[a] -= 1;
            row[b] -= 1;
            bool nonzero = false;
            for (const auto& v : row) nonzero = nonzero || v != 0;
            if (nonzero) rows.push_back(std::move(row));
        }
    }
    RatMat basis = nullspace(rows, static_cast<std::size_t>(n));
    std::vector<ConservedQuantity> out;
    for (auto& row : basis) out.push_back({std::move(row)});
    return out;
}

SimpleReport is_simple(const Interaction& in, const std::vector<ConservedQuantity>& basis) {
    SimpleReport rep;
    if (basis.size() != 1) {
        rep.detail = "c_phi = " + std::to_string(basis.size()) + " (need exactly 1)";
        return rep;
    }
    const auto& xi = basis.front().values;
    // Rescale xi(S) to coprime integers.
    mpz_class lcm_den(1);
    for (const auto& v : xi) mpz_lcm(lcm_den.get_mpz_t(), lcm_den.get_mpz_t(), v.get_den().get_mpz_t());
    std::vector<mpz_class> ints;
    for (const auto& v : xi) ints.push_back(v.get_num() * (lcm_den / v.get_den()));
    mpz_class g(0);
    for (const auto& z : ints) mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), z.get_mpz_t());
    if (g == 0) {
        rep.detail = "conserved quantity vanishes on every state";
        return rep;
    }
    for (auto& z : ints) z /= g;
    bool has_pos = false, has_neg = false;
    bool has_unit = false;
    for (const auto& z : ints) {
        if (z > 0) has_pos = true;
        if (z < 0) has_neg = true;
        if (z == 1 || z == -1) has_unit = true;
    }
    if (has_pos && has_neg) {
        // A finitely generated submonoid of Z with both signs is the full
        // group generated, which after rescaling is Z itself.
        rep.simple = true;
        rep.monoid_is_group = true;
        rep.detail = "mixed-sign values generate Z";
        return rep;
    }
    if (has_unit) {
        rep.simple = true;
        rep.detail = "one-signed values with a unit generator: monoid is N";
        return rep;
    }
    rep.near_miss_semigroup = true;
    rep.detail =
        "one-signed values generate a proper numerical semigroup (eventually all of N but missing small "
        "elements); not monoid-isomorphic to N";
    return rep;
}

ChargeContext::ChargeContext(const Interaction& in, std::vector<ConservedQuantity> basis)
    : in_(in), basis_(std::move(basis)) {
    for (int s = 0; s < in_.num_states(); ++s) {
        Charge c;
        for (const auto& q : basis_) c.push_back(q(s));
        state_charges_.push_back(std::move(c));
    }
    min_sites_memo_[zero()] = 0;
}

void ChargeContext::explore(int depth) const {
    while (explored_depth_ < depth) {
        int next = explored_depth_ + 1;
        std::vector<Charge> frontier;
        for (const auto& [c, k] : min_sites_memo_)
            if (k == explored_depth_) frontier.push_back(c);
        for (const auto& c : frontier) {
            for (const auto& sc : state_charges_) {
                Charge w(c.size());
                for (std::size_t i = 0; i < c.size(); ++i) w[i] = c[i] + sc[i];
                min_sites_memo_.emplace(std::move(w), next);
            }
        }
        explored_depth_ = next;
    }
}

std::optional<int> ChargeContext::min_sites(const Charge& c, int max_sites) const {
    explore(max_sites);
    auto it = min_sites_memo_.find(c);
    if (it == min_sites_memo_.end() || it->second > max_sites) return std::nullopt;
    return it->second;
}

bool ChargeContext::realizable(const Charge& c, int k) const { return min_sites(c, k).has_value(); }

std::vector<Charge> ChargeContext::charges_up_to(int k) const {
    explore(k);
    std::vector<Charge> out;
    for (const auto& [c, m] : min_sites_memo_)
        if (m <= k) out.push_back(c);
    return out;  // std::map iteration is already sorted
}

namespace {

// Dense mixed-radix encoding of configurations on a small locale.
struct DenseSpace {
    int n_sites;
    int n_states;
    long long size;

    long long encode(const std::vector<int>& states) const {
        long long idx = 0;
        for (int i = 0; i < n_sites; ++i) idx = idx * n_states + states[i];
        return idx;
    }
    std::vector<int> decode(long long idx) const {
        std::vector<int> states(n_sites);
        for (int i = n_sites - 1; i >= 0; --i) {
            states[i] = static_cast<int>(idx % n_states);
            idx /= n_states;
        }
        return states;
    }
};

}  // namespace

EvidenceReport irreducibility_evidence(const Interaction& in, const std::vector<ConservedQuantity>& basis,
                                       const std::vector<std::pair<std::string, MultiGraph>>& locales,
                                       long long state_cap, int threads) {
    EvidenceReport report;
    report.all_pass = true;
    ChargeContext ctx(in, basis);
    for (const auto& [name, locale] : locales) {
        if (!is_connected(locale)) throw InputError("irreducibility_evidence: locale '" + name + "' is disconnected");
        const int n = locale.num_vertices;
        const int s = in.num_states();
        long long size = 1;
        for (int i = 0; i < n; ++i) {
            size *= s;
            if (size > state_cap)
                throw CapError("irreducibility_evidence: locale '" + name + "' has about " +
                               std::to_string(size) + "+ configurations, above the cap of " +
                               std::to_string(state_cap));
        }
        DenseSpace space{n, s, size};
        // Group configurations by charge, then check connectivity inside
        // each class; transitions never leave a class.
        std::map<Charge, std::vector<long long>> classes;
        for (long long idx = 0; idx < size; ++idx) {
            auto states = space.decode(idx);
            Charge c = ctx.zero();
            for (int i = 0; i < n; ++i)
                for (std::size_t b = 0; b < c.size(); ++b) c[b] += ctx.state_charge(states[i])[b];
            classes[c].push_back(idx);
        }
        std::vector<const std::vector<long long>*> class_list;
        for (const auto& [c, members] : classes) class_list.push_back(&members);
        std::vector<long long> components_per_class(class_list.size(), 0);

        auto count_components = [&](const std::vector<long long>& members) -> long long {
            std::map<long long, int> local;
            for (std::size_t i = 0; i < members.size(); ++i) local[members[i]] = -1;
            long long comps = 0;
            std::vector<long long> stack;
            for (long long root : members) {
                if (local[root] != -1) continue;
                ++comps;
                local[root] = 1;
                stack.push_back(root);
                while (!stack.empty()) {
                    long long cur = stack.back();
                    stack.pop_back();
                    auto states = space.decode(cur);
                    for (int e = 0; e < locale.num_edges(); ++e) {
                        int o = locale.origin[e], t = locale.target[e];
                        if (o == t) continue;
                        auto [a, b] = in.apply(states[o], states[t]);
                        if (a == states[o] && b == states[t]) continue;
                        auto next = states;
                        next[o] = a;
                        next[t] = b;
                        long long nid = space.encode(next);
                        auto it = local.find(nid);
                        if (it == local.end() || it->second != -1) continue;
                        it->second = 1;
                        stack.push_back(nid);
                    }
                }
            }
            return comps;
        };

        int nthreads = std::max(1, threads);
        if (nthreads == 1 || class_list.size() < 2) {
            for (std::size_t i = 0; i < class_list.size(); ++i)
                components_per_class[i] = count_components(*class_list[i]);
        } else {
            std::vector<std::thread> pool;
            std::size_t per = (class_list.size() + nthreads - 1) / nthreads;
            for (int t = 0; t < nthreads; ++t) {
                std::size_t lo = t * per, hi = std::min(class_list.size(), lo + per);
                if (lo >= hi) break;
                pool.emplace_back([&, lo, hi] {
                    for (std::size_t i = lo; i < hi; ++i) components_per_class[i] = count_components(*class_list[i]);
                });
            }
            for (auto& th : pool) th.join();
        }

        LocaleEvidence ev;
        ev.locale_name = name;
        ev.num_configs = size;
        ev.num_charge_classes = static_cast<long long>(classes.size());
        ev.num_components = std::accumulate(components_per_class.begin(), components_per_class.end(), 0LL);
        ev.pass = ev.num_components == ev.num_charge_classes;
        report.all_pass = report.all_pass && ev.pass;
        report.locales.push_back(ev);
    }
    return report;
}

std::vector<std::pair<std::string, MultiGraph>> default_locale_family(int max_vertices) {
    std::vector<std::pair<std::string, MultiGraph>> out;
    for (int n = 2; n <= max_vertices; ++n) out.emplace_back("path_" + std::to_string(n), path_graph(n));
    for (int n = 3; n <= max_vertices; ++n) out.emplace_back("cycle_" + std::to_string(n), cycle_graph(n));
    return out;
}

Interaction exclusion_interaction() {
    Interaction in;
    in.state_names = {"0", "1"};
    in.base = 0;
    for (int a = 0; a < 2; ++a)
        for (int b = 0; b < 2; ++b) in.table.push_back({b, a});
    return in;
}

Interaction identity_interaction(int num_states) {
    Interaction in;
    for (int s = 0; s < num_states; ++s) in.state_names.push_back(std::to_string(s));
    in.base = 0;
    for (int a = 0; a < num_states; ++a)
        for (int b = 0; b < num_states; ++b) in.table.push_back({a, b});
    return in;
}

Interaction two_species_exclusion() {
    Interaction in;
    in.state_names = {"0", "A", "B"};
    in.base = 0;
    for (int a = 0; a < 3; ++a)
        for (int b = 0; b < 3; ++b) in.table.push_back({b, a});
    return in;
}

}  // namespace crystalforms
