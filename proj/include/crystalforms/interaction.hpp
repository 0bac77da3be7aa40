#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "crystalforms/multigraph.hpp"
#include "crystalforms/rational.hpp"

namespace crystalforms {

// Interaction (S, phi): finite state set with a distinguished base state
// and an exchange map phi on ordered pairs of states. The defining
// symmetry: on every non-fixed pair, conj(phi) o phi is the identity,
// where conj(phi) = swap o phi o swap.
struct Interaction {
    std::vector<std::string> state_names;
    int base = 0;
    std::vector<std::pair<int, int>> table;  // index s1 * |S| + s2 -> (s1', s2')

    int num_states() const { return static_cast<int>(state_names.size()); }
    std::pair<int, int> apply(int s1, int s2) const { return table[s1 * num_states() + s2]; }
    bool fixes(int s1, int s2) const { return apply(s1, s2) == std::make_pair(s1, s2); }
    int state_index(const std::string& name) const;
};

struct InteractionViolation {
    int s1, s2;           // offending input pair
    std::string message;
};

// Empty report means the interaction is valid.
std::vector<InteractionViolation> validate_interaction(const Interaction& in);

// Conserved quantity: per-state rational values, zero at the base state,
// with xi(s1)+xi(s2) preserved by phi.
struct ConservedQuantity {
    RatVec values;  // one per state

    Rat operator()(int s) const { return values[s]; }
};

// Deterministic echelonized basis of the space of conserved quantities.
std::vector<ConservedQuantity> conserved_basis(const Interaction& in);

struct SimpleReport {
    bool simple = false;
    bool near_miss_semigroup = false;  // one-signed values generate a proper numerical semigroup
    bool monoid_is_group = false;      // the generated monoid is all of gZ
    std::string detail;
};

// Simple means c_phi == 1 and the monoid generated by xi(S) is isomorphic
// to N or Z as a monoid. A numerical semigroup such as <2,3> is not
// isomorphic to N and is reported as a near miss.
SimpleReport is_simple(const Interaction& in, const std::vector<ConservedQuantity>& basis);

// Charge vectors live in Q^{c_phi} with respect to a fixed basis.
using Charge = RatVec;

class ChargeContext {
  public:
    ChargeContext(const Interaction& in, std::vector<ConservedQuantity> basis);

    int c_phi() const { return static_cast<int>(basis_.size()); }
    const std::vector<ConservedQuantity>& basis() const { return basis_; }
    const Interaction& interaction() const { return in_; }

    Charge zero() const { return Charge(basis_.size(), Rat(0)); }
    const Charge& state_charge(int s) const { return state_charges_[s]; }

    // Minimum number of sites needed to realize the charge, or nullopt if
    // it is not realizable within max_sites.
    std::optional<int> min_sites(const Charge& c, int max_sites) const;

    // Membership in M_k: realizable as the total charge of k sites.
    bool realizable(const Charge& c, int k) const;

    // All charges realizable with exactly k sites (M_k), sorted.
    std::vector<Charge> charges_up_to(int k) const;

  private:
    Interaction in_;
    std::vector<ConservedQuantity> basis_;
    std::vector<Charge> state_charges_;
    mutable std::map<Charge, int> min_sites_memo_;  // charge -> exact minimum
    mutable int explored_depth_ = 0;
    void explore(int depth) const;
};

struct LocaleEvidence {
    std::string locale_name;
    long long num_configs = 0;
    long long num_charge_classes = 0;
    long long num_components = 0;
    bool pass = false;
};

struct EvidenceReport {
    std::vector<LocaleEvidence> locales;
    bool all_pass = false;
};

// Exhaustive check that configurations with equal conserved charges are
// connected by transitions, on each given finite locale. Evidence only:
// passing every listed locale proves nothing about larger ones.
EvidenceReport irreducibility_evidence(const Interaction& in, const std::vector<ConservedQuantity>& basis,
                                       const std::vector<std::pair<std::string, MultiGraph>>& locales,
                                       long long state_cap, int threads = 1);

// Simple paths and cycles with 2..max_vertices vertices.
std::vector<std::pair<std::string, MultiGraph>> default_locale_family(int max_vertices);

// Built-in interactions used by fixtures and tests.
Interaction exclusion_interaction();
Interaction identity_interaction(int num_states);
Interaction two_species_exclusion();

}  // namespace crystalforms
