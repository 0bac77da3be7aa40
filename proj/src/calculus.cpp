#include "crystalforms/calculus.hpp"

#include <algorithm>

namespace crystalforms {

System::System(PeriodicLattice lat, Interaction in)
    : lattice(std::move(lat)),
      interaction(std::move(in)),
      basis(conserved_basis(interaction)),
      charges(interaction, basis) {
    lattice.validate();
}

Rat LocalFunction::eval(const Configuration& eta, int base) const {
    std::vector<int> states;
    states.reserve(support.size());
    for (const auto& v : support) states.push_back(eta.state_at(v, base));
    auto it = table.find(states);
    return it == table.end() ? Rat(0) : it->second;
}

void LocalFunction::validate(int num_states, int base) const {
    if (!std::is_sorted(support.begin(), support.end())) throw InputError("local function: unsorted support");
    for (const auto& [states, value] : table) {
        if (states.size() != support.size()) throw InputError("local function: pattern arity mismatch");
        for (int s : states) {
            if (s < 0 || s >= num_states) throw InputError("local function: state out of range");
            if (vanishing && s == base)
                throw InputError("local function: vanishing table has a base-state pattern");
        }
    }
}

Rat UniformFunction::evaluate(const Configuration& eta, int base) const {
    Rat sum(0);
    if (!shift_invariant) {
        for (const auto& t : terms) sum += t.eval(eta, base);
        return sum;
    }
    // Orbit terms: sum over the translates whose support lies inside the
    // support of eta. Anchored on the first support vertex.
    for (const auto& t : terms) {
        if (t.support.empty()) continue;
        const LatticeVertex& anchor = t.support.front();
        for (const auto& [v, s] : eta.sites) {
            if (v.base != anchor.base) continue;
            Cell delta = cell_sub(v.cell, anchor.cell);
            std::vector<int> states;
            states.reserve(t.support.size());
            bool all_nonbase = true;
            for (const auto& u : t.support) {
                int st = eta.state_at({u.base, cell_add(u.cell, delta)}, base);
                if (st == base) {
                    all_nonbase = false;
                    break;
                }
                states.push_back(st);
            }
            if (!all_nonbase) continue;
            auto it = t.table.find(states);
            if (it != t.table.end()) sum += it->second;
        }
    }
    return sum;
}

FnEval UniformFunction::evaluator(int base) const {
    UniformFunction copy = *this;
    return [copy, base](const Configuration& eta) -> Rat { return copy.evaluate(eta, base); };
}

std::vector<LatticeVertex> canonical_anchor(const std::vector<LatticeVertex>& support, Cell* delta_out) {
    if (support.empty()) throw InputError("canonical_anchor: empty support");
    std::vector<LatticeVertex> sorted = support;
    std::sort(sorted.begin(), sorted.end());
    Cell delta = cell_neg(sorted.front().cell);
    for (auto& v : sorted) v.cell = cell_add(v.cell, delta);
    if (delta_out) *delta_out = delta;
    return sorted;
}

UniformFunction conserved_field(const System& sys, const ConservedQuantity& xi) {
    UniformFunction f;
    f.shift_invariant = true;
    f.radius = 0;
    for (int b = 0; b < sys.lattice.num_bases(); ++b) {
        LocalFunction term;
        term.support = {LatticeVertex{b, Cell(sys.lattice.rank, 0)}};
        term.vanishing = true;
        for (int s = 0; s < sys.num_states(); ++s) {
            if (s == sys.base() || xi(s) == 0) continue;
            term.table[{s}] = xi(s);
        }
        f.terms.push_back(std::move(term));
    }
    return f;
}

DifferentialForm::DifferentialForm(const System& sys, FnEval f, int radius)
    : sys_(&sys), f_(std::move(f)), radius_(radius) {}

Rat DifferentialForm::operator()(const Configuration& eta, const LatticeEdge& e) const {
    Configuration moved = apply_edge(sys_->lattice, sys_->interaction, eta, e);
    if (moved == eta) return Rat(0);
    return f_(moved) - f_(eta);
}

OrbitDataForm::OrbitDataForm(const System& sys, int radius, std::vector<std::map<Configuration, Rat>> entries)
    : sys_(&sys), radius_(radius), entries_(std::move(entries)) {
    if (static_cast<int>(entries_.size()) != sys.lattice.seed.num_edges())
        throw InputError("orbit form: one entry table per seed edge required");
    for (int e = 0; e < sys.lattice.seed.num_edges(); ++e) {
        LatticeEdge anchored{e, Cell(sys.lattice.rank, 0)};
        balls_.push_back(lattice_graph_ball(sys.lattice, edge_origin(sys.lattice, anchored), radius_));
    }
}

Rat OrbitDataForm::operator()(const Configuration& eta, const LatticeEdge& e) const {
    Configuration local = translate_configuration(eta, cell_neg(e.anchor));
    Configuration pattern = restrict_configuration(local, balls_[e.seed_edge]);
    const auto& tab = entries_[e.seed_edge];
    auto it = tab.find(pattern);
    return it == tab.end() ? Rat(0) : it->second;
}

void OrbitDataForm::validate_alternating(long long cap) const {
    const auto& lat = sys_->lattice;
    const auto& in = sys_->interaction;
    for (int e = 0; e < lat.seed.num_edges(); ++e) {
        LatticeEdge inst{e, Cell(lat.rank, 0)};
        LatticeEdge inv = edge_inverse(lat, inst);
        // Region whose states can influence either side of eq-style
        // alternation: both origin balls.
        std::vector<LatticeVertex> region = balls_[e];
        for (const auto& v : lattice_graph_ball(lat, edge_origin(lat, inv), radius_)) region.push_back(v);
        std::sort(region.begin(), region.end());
        region.erase(std::unique(region.begin(), region.end()), region.end());
        long long count = 1;
        for (std::size_t i = 0; i < region.size(); ++i) {
            count *= in.num_states();
            if (count > cap)
                throw CapError("orbit form validation: pattern space above cap at seed edge " +
                               std::to_string(e));
        }
        for (long long idx = 0; idx < count; ++idx) {
            long long rest = idx;
            std::vector<std::pair<LatticeVertex, int>> raw;
            for (const auto& v : region) {
                raw.emplace_back(v, static_cast<int>(rest % in.num_states()));
                rest /= in.num_states();
            }
            Configuration eta = Configuration::of(std::move(raw), in.base);
            Configuration moved = apply_edge(lat, in, eta, inst);
            Rat here = (*this)(eta, inst);
            if (moved == eta) {
                if (here != 0)
                    throw InputError("orbit form: nonzero value on a fixed transition at seed edge " +
                                     std::to_string(e));
            } else {
                Rat there = (*this)(moved, inv);
                if (here != -there)
                    throw InputError("orbit form: alternating condition violated at seed edge " +
                                     std::to_string(e));
            }
        }
    }
}

void FormSum::add(Rat coeff, std::shared_ptr<const Form> part) { parts_.emplace_back(std::move(coeff), std::move(part)); }

Rat FormSum::operator()(const Configuration& eta, const LatticeEdge& e) const {
    Rat sum(0);
    for (const auto& [c, part] : parts_) sum += c * (*part)(eta, e);
    return sum;
}

int FormSum::radius() const {
    int r = 0;
    for (const auto& [c, part] : parts_) r = std::max(r, part->radius());
    return r;
}

bool FormSum::differential_backed() const {
    for (const auto& [c, part] : parts_)
        if (!part->differential_backed()) return false;
    return true;
}

DifferentialForm differential(const System& sys, const UniformFunction& f) {
    // del f depends on states within (max support diameter + 1) of the
    // moved pair in the graph metric.
    int diam = 0;
    for (const auto& t : f.terms) {
        for (std::size_t i = 0; i < t.support.size(); ++i)
            for (std::size_t j = i + 1; j < t.support.size(); ++j) {
                auto d = lattice_distance(sys.lattice, t.support[i], t.support[j], 64);
                if (!d) throw InconclusiveError("differential: support diameter above limit");
                diam = std::max(diam, *d);
            }
    }
    return DifferentialForm(sys, f.evaluator(sys.base()), diam + 1);
}

Rat integrate(const Form& omega, const std::vector<Transition>& path, const System& sys) {
    Rat sum(0);
    for (std::size_t i = 0; i < path.size(); ++i) {
        if (i + 1 < path.size()) {
            Configuration moved = apply_edge(sys.lattice, sys.interaction, path[i].config, path[i].edge);
            if (moved != path[i + 1].config) throw InputError("integrate: path does not compose");
        }
        sum += omega(path[i].config, path[i].edge);
    }
    return sum;
}

Rat iota_restrict(const FnEval& f, const std::vector<LatticeVertex>& lambda, const Configuration& eta) {
    return f(restrict_configuration(eta, lambda));
}

std::vector<LocalFunction> expand_function(const FnEval& f, const std::vector<LatticeVertex>& lambda,
                                           int num_states, int base, long long cap) {
    std::vector<LatticeVertex> sites = lambda;
    std::sort(sites.begin(), sites.end());
    sites.erase(std::unique(sites.begin(), sites.end()), sites.end());
    const std::size_t n = sites.size();
    if (n > 62 || (1LL << n) > cap)
        throw CapError("expand: 2^" + std::to_string(n) + " subsets exceed the cap");

    // Memoized evaluation on restricted configurations.
    std::map<Configuration, Rat> fval;
    auto value = [&](const Configuration& c) {
        auto it = fval.find(c);
        if (it != fval.end()) return it->second;
        Rat v = f(c);
        fval.emplace(c, v);
        return v;
    };

    std::vector<LocalFunction> out;
    // The empty piece is the constant f(star).
    Rat at_star = value(Configuration{});
    if (at_star != 0) {
        LocalFunction constant;
        constant.vanishing = true;
        constant.table.emplace(std::vector<int>{}, at_star);
        out.push_back(std::move(constant));
    }
    for (std::uint64_t mask = 1; mask < (1ULL << n); ++mask) {
        std::vector<LatticeVertex> sub;
        std::vector<std::size_t> idx;
        for (std::size_t i = 0; i < n; ++i)
            if (mask & (1ULL << i)) {
                sub.push_back(sites[i]);
                idx.push_back(i);
            }
        LocalFunction piece;
        piece.support = sub;
        piece.vanishing = true;
        // Patterns without base states on the subset.
        if (num_states < 2) continue;
        std::vector<int> non_base;
        for (int s = 0; s < num_states; ++s)
            if (s != base) non_base.push_back(s);
        std::vector<std::size_t> digit(sub.size(), 0);
        std::vector<int> states(sub.size(), non_base[0]);
        auto advance = [&]() {
            for (std::size_t i = 0; i < digit.size(); ++i) {
                if (++digit[i] < non_base.size()) {
                    states[i] = non_base[digit[i]];
                    return true;
                }
                digit[i] = 0;
                states[i] = non_base[0];
            }
            return false;
        };
        while (true) {
            // Inclusion-exclusion over subsets of the subset.
            Rat coeff(0);
            const std::size_t m = sub.size();
            for (std::uint64_t inner = 0; inner < (1ULL << m); ++inner) {
                std::vector<std::pair<LatticeVertex, int>> raw;
                int popcount = 0;
                for (std::size_t i = 0; i < m; ++i)
                    if (inner & (1ULL << i)) {
                        raw.emplace_back(sub[i], states[i]);
                        ++popcount;
                    }
                Rat v = value(Configuration::of(std::move(raw), base));
                if ((static_cast<int>(m) - popcount) % 2 == 0)
                    coeff += v;
                else
                    coeff -= v;
            }
            if (coeff != 0) piece.table.emplace(states, coeff);
            if (!advance()) break;
        }
        if (!piece.table.empty()) out.push_back(std::move(piece));
    }
    return out;
}

Potential::Potential(const System& sys, const FiniteWindow& w, const Form& omega, SearchBudget budget)
    : sys_(&sys), omega_(&omega), norm_(w, sys.interaction, sys.charges, budget) {}

Rat Potential::operator()(const Configuration& eta) const {
    auto it = memo_.find(eta);
    if (it != memo_.end()) return it->second;
    auto path = norm_.normalize_path(eta);
    Rat value = -integrate(*omega_, path, *sys_);
    memo_.emplace(eta, value);
    return value;
}

FnEval Potential::evaluator() const {
    return [this](const Configuration& eta) -> Rat { return (*this)(eta); };
}

std::optional<ClosednessWitness> check_potential_consistency(const System& sys, const Potential& f,
                                                             const Form& omega,
                                                             const std::vector<Transition>& transitions) {
    for (const auto& t : transitions) {
        Configuration moved = apply_edge(sys.lattice, sys.interaction, t.config, t.edge);
        Rat expected = omega(t.config, t.edge);
        Rat got = f(moved) - f(t.config);
        if (expected == got) continue;
        ClosednessWitness w;
        w.transition = t;
        w.residual = got - expected;
        // Closed loop rep -> eta -> eta^e -> rep exhibiting the violation.
        auto path_from_eta = f.normalizer().normalize_path(t.config);
        auto path_from_moved = f.normalizer().normalize_path(moved);
        for (auto rit = path_from_eta.rbegin(); rit != path_from_eta.rend(); ++rit)
            w.cycle.push_back(invert_transition(sys.lattice, sys.interaction, *rit));
        w.cycle.push_back(t);
        for (const auto& step : path_from_moved) w.cycle.push_back(step);
        return w;
    }
    return std::nullopt;
}

ShiftReport is_shift_invariant(const Form& omega, const System& sys,
                               const std::vector<Transition>& samples) {
    ShiftReport rep;
    for (int j = 0; j < sys.lattice.rank; ++j) {
        Cell delta(sys.lattice.rank, 0);
        delta[j] = 1;
        for (const auto& t : samples) {
            Configuration shifted = translate_configuration(t.config, delta);
            LatticeEdge se{t.edge.seed_edge, cell_add(t.edge.anchor, delta)};
            if (omega(shifted, se) != omega(t.config, t.edge)) {
                rep.invariant = false;
                rep.witness = t;
                rep.witness_delta = delta;
                return rep;
            }
        }
    }
    return rep;
}

}  // namespace crystalforms
