#pragma once

#include <optional>
#include <random>

#include "crystalforms/calculus.hpp"

namespace crystalforms {

struct BallSpec {
    Cell center;
    int radius = 0;
};

struct PairProvenance {
    BallSpec d1, d2;
};

// Charge-indexed pairing of a function whose differential is uniform:
// h_f(a, b) = f(eta12) - f(eta1) - f(eta2) for configurations realizing
// the charges in two separated balls. Balls are l1 cell balls (the block
// balls of an essentially Euclidean coordinate); for lattices that are
// not essentially Euclidean the caller passes the enlarged separation
// radius of the equivalent Euclidean presentation.
class PairingEngine {
  public:
    PairingEngine(const System& sys, const FiniteWindow& w, FnEval f, int sep_radius);

    // iota^{L1 u L2} f - iota^{L1} f - iota^{L2} f at eta. Throws
    // InputError when the block separation is not above the radius.
    Rat pairing_local(const std::vector<LatticeVertex>& l1, const std::vector<LatticeVertex>& l2,
                      const Configuration& eta) const;

    // Canonical admissible ball pair for charges of k sites: radius-k
    // balls centered at -+(2R + 2k + 2) e1. Nonzero variants produce
    // other admissible pairs (shifted, enlarged, side-swapped) for
    // well-definedness checks.
    std::pair<BallSpec, BallSpec> canonical_pair(int k, int variant = 0) const;

    Rat pairing(const Charge& a, const Charge& b, int k = -1, int variant = 0,
                PairProvenance* prov = nullptr) const;

    // Lexicographically least realization of the charge inside the ball.
    Configuration realize_in_ball(const Charge& a, const BallSpec& ball) const;

    int min_particles(const Charge& a) const;
    int separation_radius() const { return sep_; }

    // Window extent along the first axis needed by the canonical pair.
    static int required_extent(int sep_radius, int k);

  private:
    const System* sys_;
    const FiniteWindow* w_;
    FnEval f_;
    int sep_;

    std::vector<LatticeVertex> ball_vertices(const BallSpec& b) const;
};

struct PairingTable {
    // (a, b) -> value, for charges with a, b, a+b realizable within the
    // tabulated site budget.
    std::map<std::pair<Charge, Charge>, Rat> values;
    std::map<std::pair<Charge, Charge>, PairProvenance> provenance;
    int site_budget = 0;
};

PairingTable tabulate_pairing(const PairingEngine& engine, const ChargeContext& ctx, int site_budget);

enum class MonoidKind { SymmetricSystem, MonoidN, MonoidZ };

struct SplittingFunction {
    std::map<Charge, Rat> values;  // h on the tabulated charge range, h(0) = 0

    Rat at(const Charge& c) const;
    bool covers(const Charge& c) const { return values.count(c) > 0; }
};

// Splits H(a,b) = h(a) + h(b) - h(a+b) on the tabulated range. For
// MonoidN / MonoidZ the construction is the generator recursion with
// h(0) = h(gen) = 0; for SymmetricSystem the defining linear system is
// solved exactly. Inconsistent input (a cocycle or symmetry violation)
// throws InputError naming a violated instance.
SplittingFunction split_cocycle(const PairingTable& table, MonoidKind kind, const ChargeContext& ctx);

struct CorrectionResult {
    FnEval g0;  // f + h(xi): pairing-free, so uniform by the criterion
    SplittingFunction h;
    PairingTable table_f;
    PairingTable table_g0;  // recomputed with g0; must vanish identically
    MonoidKind kind = MonoidKind::SymmetricSystem;
    bool pairing_vanishes = false;
};

// Corrects a potential whose differential is uniform into a uniform
// function by adding the splitting of its pairing. The returned closure
// keeps its own copies but still reads the window and system.
CorrectionResult correct_to_uniform(const System& sys, const FiniteWindow& w, const FnEval& f,
                                    int sep_radius, int site_budget);

struct UniformityWitness {
    std::vector<LatticeVertex> lambda;
    LatticeVertex x;
    Configuration eta;
    Rat lhs, rhs;
};

struct UniformityOptions {
    int max_support = 3;       // |Lambda| budget
    int max_spread = 6;        // block distance reach when sampling Lambda
    long long pattern_cap = 100000;
};

// Finite verification of the uniformity criterion for radius R: for
// sampled window-interior Lambda and x in Lambda,
//   iota^Lambda f - iota^{Lambda \ B(x,0)} f
//     = iota^{Lambda n B(x,R)} f - iota^{Lambda n B*(x,R)} f
// pointwise. Returns the first failing witness, if any.
std::optional<UniformityWitness> uniformity_check(const System& sys, const FiniteWindow& w, const FnEval& f,
                                                  int radius, const UniformityOptions& opts = {});

// A^j_xi: eta -> sum over the support of n_j(cell) * xi(state). Its
// differentials span the complement of the shift-invariant exact forms.
struct AFunction {
    ConservedQuantity xi;
    int axis = 0;  // 0-based

    Rat evaluate(const Configuration& eta, int base) const;
    FnEval evaluator(int base) const;
};

AFunction a_function(const System& sys, const ConservedQuantity& xi, int axis);

// ((1 - sigma_k) A^j_xi)(eta) == (j == k ? xi_X(eta) : 0) on the samples.
bool a_identity_check(const System& sys, const AFunction& a, int axis_k,
                      const std::vector<Configuration>& samples);

// Rank of the evaluation matrix of {del A^j_{xi_b}} on a spanning family
// of window transitions; equals c_phi * d when the window is adequate.
int dim_dV_rank(const System& sys, const FiniteWindow& w);

struct CertificateEntry {
    Transition transition;
    Rat residual;
};

struct DecomposeOptions {
    int charge_sites = 3;                // site budget for the pairing table
    int certificate_max_particles = 3;   // support bound for certificate configs
    int certificate_radius = 1;          // graph-ball radius of certificate regions
    long long pattern_cap = 2'000'000;
    SearchBudget search;
    bool expand_output = true;           // produce orbit-data expansion of g
    int expand_radius = -1;              // block radius of the output expansion; -1 = separation radius
    unsigned rng_seed = 20240 /* arbitrary fixed default */;
};

struct DecompositionResult {
    std::vector<ConservedQuantity> zetas;  // one per axis
    UniformFunction g_orbit;               // shift-invariant orbit data (when expanded)
    // Exact evaluator of g. Owns its potential, but still reads the
    // System and FiniteWindow passed to decompose: keep those alive.
    FnEval g_eval;
    SplittingFunction h;
    PairingTable table_f;
    PairingTable table_g0;  // must vanish identically
    MonoidKind split_kind = MonoidKind::SymmetricSystem;

    std::vector<CertificateEntry> certificate;
    bool certificate_ok = false;
    bool pairing_of_g_vanishes = false;
    bool g_shift_invariant = false;
    bool expansion_consistent = false;

    bool used_ee_equivalent = false;
    EquivalenceConstants transport;
    int separation_radius = 0;
    int charge_sites = 0;
    CellBox window_box;
    std::vector<int> fundamental_domain;  // seed vertex ids of the cell-0 copy

    bool ok() const {
        return certificate_ok && pairing_of_g_vanishes && g_shift_invariant &&
               (expansion_consistent || g_orbit.terms.empty());
    }
};

// The decomposition: given a shift-invariant closed uniform form, produce
// zeta^(j) and a shift-invariant uniform g with
//   omega = del g + sum_j del A^j_{zeta^(j)},
// verified exactly on the certificate transitions.
DecompositionResult decompose(const System& sys, const Form& omega, const FiniteWindow& w,
                              const DecomposeOptions& opts = {});

// Window box adequate for decompose with the given parameters.
CellBox recommended_box(const System& sys, int form_radius, const DecomposeOptions& opts);

// Deterministic sample transitions near the origin cell (used for shift
// checks and certificates).
std::vector<Transition> sample_transitions(const System& sys, const FiniteWindow& w, int max_particles,
                                           int region_radius, std::mt19937_64& rng, int count);

// Anchored supports of l1 cell diameter <= radius whose least vertex lies
// in cell 0: one representative per translation orbit.
std::vector<std::vector<LatticeVertex>> anchored_supports(const PeriodicLattice& lat, int radius,
                                                          int max_size);

std::vector<Configuration> sample_configurations(const System& sys, const FiniteWindow& w, int max_particles,
                                                 int region_radius, std::mt19937_64& rng, int count);

}  // namespace crystalforms
