#pragma once

#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <unordered_map>
#include <vector>

#include "crystalforms/configspace.hpp"

namespace crystalforms {

// Lattice + interaction + conserved structure, bundled because nearly
// every operation needs all three.
struct System {
    PeriodicLattice lattice;
    Interaction interaction;
    std::vector<ConservedQuantity> basis;
    ChargeContext charges;

    System(PeriodicLattice lat, Interaction in);

    int base() const { return interaction.base; }
    int num_states() const { return interaction.num_states(); }
};

using FnEval = std::function<Rat(const Configuration&)>;

// Function depending only on the states over a finite support. When
// `vanishing` is set the table is supported on patterns without base
// states (the normalized pieces of the unique expansion).
struct LocalFunction {
    std::vector<LatticeVertex> support;  // sorted
    bool vanishing = true;
    std::map<std::vector<int>, Rat> table;  // states aligned with support; missing = 0

    Rat eval(const Configuration& eta, int base) const;
    void validate(int num_states, int base) const;
};

// Finite formal sum of local functions; with `shift_invariant` the terms
// are orbit data and evaluation sums over all lattice translates (finite
// on finitely supported configurations because terms vanish off their
// support).
struct UniformFunction {
    std::vector<LocalFunction> terms;
    int radius = 0;
    bool block_metric = true;
    bool shift_invariant = false;

    Rat evaluate(const Configuration& eta, int base) const;
    FnEval evaluator(int base) const;
};

// Translate a support so its least vertex sits in cell zero.
std::vector<LatticeVertex> canonical_anchor(const std::vector<LatticeVertex>& support, Cell* delta_out = nullptr);

// xi_X as a shift-invariant uniform function (one single-site orbit term
// per base vertex).
UniformFunction conserved_field(const System& sys, const ConservedQuantity& xi);

// Forms: edge-indexed alternating families evaluated on transitions.
class Form {
  public:
    virtual ~Form() = default;
    virtual Rat operator()(const Configuration& eta, const LatticeEdge& e) const = 0;
    virtual int radius() const = 0;  // graph-metric uniformity radius
    virtual bool differential_backed() const { return false; }
};

class DifferentialForm final : public Form {
  public:
    DifferentialForm(const System& sys, FnEval f, int radius);
    Rat operator()(const Configuration& eta, const LatticeEdge& e) const override;
    int radius() const override { return radius_; }
    bool differential_backed() const override { return true; }

  private:
    const System* sys_;
    FnEval f_;
    int radius_;
};

// Shift-invariant form given by tables on the seed edges: the value on
// (eta, e) is read off the pattern of eta on the ball around the anchored
// representative of e's orbit.
class OrbitDataForm final : public Form {
  public:
    OrbitDataForm(const System& sys, int radius, std::vector<std::map<Configuration, Rat>> entries);
    Rat operator()(const Configuration& eta, const LatticeEdge& e) const override;
    int radius() const override { return radius_; }

    // Full scan of the alternating condition on every seed edge; throws
    // InputError with the offending pattern when violated.
    void validate_alternating(long long cap) const;

    const std::vector<std::map<Configuration, Rat>>& entries() const { return entries_; }
    const std::vector<LatticeVertex>& ball_of(int seed_edge) const { return balls_[seed_edge]; }

  private:
    const System* sys_;
    int radius_;
    std::vector<std::map<Configuration, Rat>> entries_;
    std::vector<std::vector<LatticeVertex>> balls_;
};

class FormSum final : public Form {
  public:
    void add(Rat coeff, std::shared_ptr<const Form> part);
    Rat operator()(const Configuration& eta, const LatticeEdge& e) const override;
    int radius() const override;
    bool differential_backed() const override;

  private:
    std::vector<std::pair<Rat, std::shared_ptr<const Form>>> parts_;
};

DifferentialForm differential(const System& sys, const UniformFunction& f);

Rat integrate(const Form& omega, const std::vector<Transition>& path, const System& sys);

// iota^Lambda f: evaluate f on eta restricted to Lambda.
Rat iota_restrict(const FnEval& f, const std::vector<LatticeVertex>& lambda, const Configuration& eta);

// Unique expansion into vanishing local pieces over subsets of lambda
// (inclusion-exclusion). Only nonzero pieces are returned, sorted by
// support. Throws CapError when 2^|lambda| would exceed the cap.
std::vector<LocalFunction> expand_function(const FnEval& f, const std::vector<LatticeVertex>& lambda,
                                           int num_states, int base, long long cap);

// Potential of a closed form on a window: f with del f = omega, zero at
// the canonical representative of each charge component. Values are path
// integrals along normal-form paths; memoized.
class Potential {
  public:
    Potential(const System& sys, const FiniteWindow& w, const Form& omega, SearchBudget budget = {});

    Rat operator()(const Configuration& eta) const;
    const Normalizer& normalizer() const { return norm_; }
    FnEval evaluator() const;

  private:
    const System* sys_;
    const Form* omega_;
    Normalizer norm_;
    mutable std::unordered_map<Configuration, Rat, ConfigurationHash> memo_;
};

struct ClosednessWitness {
    Transition transition;
    Rat residual;
    std::vector<Transition> cycle;  // closed loop through the offending transition
};

// Checks del f == omega on the given transitions; any violation is
// returned with the full offending cycle.
std::optional<ClosednessWitness> check_potential_consistency(const System& sys, const Potential& f,
                                                             const Form& omega,
                                                             const std::vector<Transition>& transitions);

struct ShiftReport {
    bool invariant = true;
    std::optional<Transition> witness;
    Cell witness_delta;
};

// Checks omega(sigma eta, sigma e) == omega(eta, e) for the generator
// shifts on the sampled transitions.
ShiftReport is_shift_invariant(const Form& omega, const System& sys,
                               const std::vector<Transition>& samples);

}  // namespace crystalforms
