#include <doctest.h>

#include <set>

#include "crystalforms/interaction.hpp"

using namespace crystalforms;

namespace {

// Interaction with one conserved quantity of values {0,2,3,4,5}: the
// generated monoid is the numerical semigroup <2,3>, eventually all of N
// but missing 1.
Interaction semigroup_interaction() {
    Interaction in;
    in.state_names = {"0", "2", "3", "4", "5"};
    in.base = 0;
    const int n = 5;
    for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b) in.table.push_back({a, b});
    auto set = [&](int a, int b, int c, int d) { in.table[a * n + b] = {c, d}; };
    // (2,2)<->(4,0), (2,3)->(5,0), (3,3)<->(2,4): forces xi = t*(0,2,3,4,5).
    set(1, 1, 3, 0);
    set(0, 3, 1, 1);
    set(1, 2, 4, 0);
    set(0, 4, 2, 1);
    set(2, 2, 1, 3);
    set(3, 1, 2, 2);
    return in;
}

// Naive per-class reachability oracle, independent of the library BFS.
bool evidence_oracle(const Interaction& in, const std::vector<ConservedQuantity>& basis,
                     const MultiGraph& locale) {
    ChargeContext ctx(in, basis);
    long long size = 1;
    for (int i = 0; i < locale.num_vertices; ++i) size *= in.num_states();
    std::vector<std::vector<int>> states_of(size);
    std::map<Charge, std::vector<long long>> classes;
    for (long long idx = 0; idx < size; ++idx) {
        std::vector<int> st(locale.num_vertices);
        long long rest = idx;
        for (int i = locale.num_vertices - 1; i >= 0; --i) {
            st[i] = static_cast<int>(rest % in.num_states());
            rest /= in.num_states();
        }
        Charge c = ctx.zero();
        for (int i = 0; i < locale.num_vertices; ++i)
            for (std::size_t b = 0; b < c.size(); ++b) c[b] += ctx.state_charge(st[i])[b];
        classes[c].push_back(idx);
        states_of[idx] = std::move(st);
    }
    auto encode = [&](const std::vector<int>& st) {
        long long idx = 0;
        for (int i = 0; i < locale.num_vertices; ++i) idx = idx * in.num_states() + st[i];
        return idx;
    };
    for (const auto& [c, members] : classes) {
        std::set<long long> seen{members.front()};
        std::vector<long long> stack{members.front()};
        while (!stack.empty()) {
            long long cur = stack.back();
            stack.pop_back();
            for (int e = 0; e < locale.num_edges(); ++e) {
                if (locale.origin[e] == locale.target[e]) continue;
                auto st = states_of[cur];
                auto [a, b] = in.apply(st[locale.origin[e]], st[locale.target[e]]);
                st[locale.origin[e]] = a;
                st[locale.target[e]] = b;
                long long nxt = encode(st);
                if (seen.insert(nxt).second) stack.push_back(nxt);
            }
        }
        if (seen.size() != members.size()) return false;
    }
    return true;
}

}  // namespace

TEST_CASE("interaction validation") {
    CHECK(validate_interaction(exclusion_interaction()).empty());
    CHECK(validate_interaction(identity_interaction(2)).empty());
    CHECK(validate_interaction(two_species_exclusion()).empty());
    CHECK(validate_interaction(semigroup_interaction()).empty());

    // Deleting a particle is irreversible and violates the symmetry.
    Interaction broken = exclusion_interaction();
    broken.table[0 * 2 + 1] = {0, 0};  // phi(0,1) = (0,0)
    auto report = validate_interaction(broken);
    REQUIRE(!report.empty());
    CHECK(report.front().s1 == 0);
    CHECK(report.front().s2 == 1);
}

TEST_CASE("conserved quantity bases are echelonized and correct") {
    auto excl = exclusion_interaction();
    auto basis = conserved_basis(excl);
    REQUIRE(basis.size() == 1);
    CHECK(basis[0](0) == 0);
    CHECK(basis[0](1) == 1);

    auto id3 = identity_interaction(3);
    auto b3 = conserved_basis(id3);
    REQUIRE(b3.size() == 2);
    CHECK(b3[0].values == RatVec{Rat(0), Rat(1), Rat(0)});
    CHECK(b3[1].values == RatVec{Rat(0), Rat(0), Rat(1)});

    auto two = two_species_exclusion();
    auto b2 = conserved_basis(two);
    REQUIRE(b2.size() == 2);

    // Every basis element satisfies the defining constraints on all pairs.
    for (const auto& in : {excl, id3, two, semigroup_interaction()}) {
        for (const auto& xi : conserved_basis(in)) {
            CHECK(xi(in.base) == 0);
            for (int s1 = 0; s1 < in.num_states(); ++s1)
                for (int s2 = 0; s2 < in.num_states(); ++s2) {
                    auto [a, b] = in.apply(s1, s2);
                    CHECK(xi(s1) + xi(s2) == xi(a) + xi(b));
                }
        }
    }

    // The semigroup interaction pins the ratios 2:3:4:5.
    auto bs = conserved_basis(semigroup_interaction());
    REQUIRE(bs.size() == 1);
    CHECK(bs[0](2) / bs[0](1) == Rat(3, 2));
    CHECK(bs[0](3) / bs[0](1) == Rat(2));
    CHECK(bs[0](4) / bs[0](1) == Rat(5, 2));
}

TEST_CASE("basis is invariant under permuting the non-base states") {
    auto two = two_species_exclusion();
    Interaction permuted = two;
    permuted.state_names = {"0", "B", "A"};
    // Same swap table; the state set is just listed in another order.
    auto basis_a = conserved_basis(two);
    auto basis_b = conserved_basis(permuted);
    REQUIRE(basis_a.size() == basis_b.size());
    // Both span the space of (xi(A), xi(B)) pairs with xi(0) = 0: check
    // by evaluating charge sums of a few mixed configurations.
    for (const auto& basis : {basis_a, basis_b}) {
        ChargeContext ctx(two, basis);
        CHECK(ctx.c_phi() == 2);
    }
}

TEST_CASE("simplicity of the generated monoid") {
    auto excl = exclusion_interaction();
    auto rep = is_simple(excl, conserved_basis(excl));
    CHECK(rep.simple);
    CHECK(!rep.near_miss_semigroup);

    auto id3 = identity_interaction(3);
    CHECK(!is_simple(id3, conserved_basis(id3)).simple);  // c_phi = 2

    auto semi = semigroup_interaction();
    auto srep = is_simple(semi, conserved_basis(semi));
    CHECK(!srep.simple);
    CHECK(srep.near_miss_semigroup);

    // Mixed signs generate the full group Z: swaps plus pair
    // annihilation (+,-) -> (0,0) and creation (0,0) -> (-,+).
    Interaction charged;
    charged.state_names = {"0", "+", "-"};
    charged.base = 0;
    for (int a = 0; a < 3; ++a)
        for (int b = 0; b < 3; ++b) charged.table.push_back({b, a});
    charged.table[1 * 3 + 2] = {0, 0};
    charged.table[0 * 3 + 0] = {2, 1};
    REQUIRE(validate_interaction(charged).empty());
    auto cb = conserved_basis(charged);
    REQUIRE(cb.size() == 1);
    auto zrep = is_simple(charged, cb);
    CHECK(zrep.simple);
    CHECK(zrep.monoid_is_group);
}

TEST_CASE("charge context: minimal site counts") {
    auto excl = exclusion_interaction();
    ChargeContext ctx(excl, conserved_basis(excl));
    CHECK(ctx.min_sites({Rat(3)}, 10) == 3);
    CHECK(!ctx.min_sites({Rat(3)}, 2).has_value());
    CHECK(ctx.realizable({Rat(0)}, 0));
    auto m3 = ctx.charges_up_to(3);
    CHECK(m3 == std::vector<Charge>{{Rat(0)}, {Rat(1)}, {Rat(2)}, {Rat(3)}});
}

TEST_CASE("irreducibility evidence on the default family") {
    auto excl = exclusion_interaction();
    auto basis = conserved_basis(excl);
    auto family = default_locale_family(4);
    auto report = irreducibility_evidence(excl, basis, family, 1'000'000);
    CHECK(report.all_pass);
    for (const auto& loc : report.locales) {
        CHECK(loc.pass);
        CHECK(loc.num_components == loc.num_charge_classes);
    }
    // Oracle agreement.
    for (const auto& [name, locale] : family) CHECK(evidence_oracle(excl, basis, locale));

    auto id2 = identity_interaction(2);
    auto idrep = irreducibility_evidence(id2, conserved_basis(id2), family, 1'000'000);
    CHECK(!idrep.all_pass);
    CHECK(!evidence_oracle(id2, conserved_basis(id2), family[0].second));

    auto two = two_species_exclusion();
    auto tworep = irreducibility_evidence(two, conserved_basis(two), default_locale_family(3), 1'000'000);
    CHECK(tworep.all_pass);

    // The exclusion single-edge case: (1,0) <-> (0,1).
    auto edge_rep = irreducibility_evidence(excl, basis, {{"edge", path_graph(2)}}, 1'000'000);
    CHECK(edge_rep.all_pass);
    CHECK(edge_rep.locales[0].num_configs == 4);
    CHECK(edge_rep.locales[0].num_charge_classes == 3);

    // Cap refusal carries a size estimate.
    CHECK_THROWS_AS(irreducibility_evidence(excl, basis, {{"big", path_graph(25)}}, 1000), CapError);
}

TEST_CASE("evidence sharding across threads is deterministic") {
    auto two = two_species_exclusion();
    auto basis = conserved_basis(two);
    auto family = default_locale_family(4);
    auto seq = irreducibility_evidence(two, basis, family, 10'000'000, 1);
    auto par = irreducibility_evidence(two, basis, family, 10'000'000, 4);
    REQUIRE(seq.locales.size() == par.locales.size());
    for (std::size_t i = 0; i < seq.locales.size(); ++i) {
        CHECK(seq.locales[i].pass == par.locales[i].pass);
        CHECK(seq.locales[i].num_components == par.locales[i].num_components);
    }
}
