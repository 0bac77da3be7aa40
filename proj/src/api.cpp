#include "crystalforms/api.hpp"

#include <chrono>
#include <cstdlib>

namespace crystalforms::api {

namespace {

std::string content_hash(const Json& j) {
    std::string dump = j.dump();
    std::uint64_t h = 14695981039346656037ULL;
    for (unsigned char c : dump) {
        h ^= c;
        h *= 1099511628211ULL;
    }
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

class Stopwatch {
  public:
    Stopwatch() : start_(std::chrono::steady_clock::now()) {}
    long long ms() const {
        return std::chrono::duration_cast<std::chrono::milliseconds>(std::chrono::steady_clock::now() -
                                                                     start_)
            .count();
    }

  private:
    std::chrono::steady_clock::time_point start_;
};

Json report_shell(const std::string& command, Json inputs, Json payload, const Stopwatch& watch) {
    return Json{{"command", command},
                {"version", kVersion},
                {"inputs", std::move(inputs)},
                {"timing_ms", watch.ms()},
                {"report", std::move(payload)}};
}

PeriodicLattice lattice_of(const Json& request) {
    if (request.contains("builtin")) {
        std::vector<int> params;
        if (request.contains("params")) params = request.at("params").get<std::vector<int>>();
        return builtin_lattice(request.at("builtin").get<std::string>(), params);
    }
    return lattice_from_json(request);
}

}  // namespace

int threads_from_env() {
    const char* env = std::getenv("VARADHAN_THREADS");
    if (!env) return 1;
    int n = std::atoi(env);
    if (n < 1) throw InputError("VARADHAN_THREADS must be a positive integer");
    return n;
}

Json lattice_build(const Json& request) {
    Stopwatch watch;
    PeriodicLattice lat = lattice_of(request);
    Json payload{{"lattice", lattice_to_json(lat)}};
    return report_shell("lattice build", Json{{"request", content_hash(request)}}, payload, watch);
}

Json lattice_inspect(const Json& lattice_json) {
    Stopwatch watch;
    PeriodicLattice lat = lattice_of(lattice_json);
    auto ee = is_essentially_euclidean(lat);
    BlockGeometry geo(lat);
    Json payload{{"name", lat.name},
                 {"rank", lat.rank},
                 {"seed_vertices", lat.seed.num_vertices},
                 {"seed_edges", lat.seed.num_edges()},
                 {"fundamental_domain_size", lat.num_bases()},
                 {"generators", lat.generator_names},
                 {"block_step_vectors", geo.steps()},
                 {"essentially_euclidean", ee.ee_at_stored_coordinate},
                 {"rank_certified", ee.rank_certified}};
    return report_shell("lattice inspect", Json{{"lattice", content_hash(lattice_json)}}, payload, watch);
}

Json lattice_check_ee(const Json& lattice_json) {
    Stopwatch watch;
    PeriodicLattice lat = lattice_of(lattice_json);
    auto ee = is_essentially_euclidean(lat);
    Json payload{{"essentially_euclidean", ee.ee_at_stored_coordinate},
                 {"rank_certified", ee.rank_certified},
                 {"rank_formula_value", ee.rank_formula_value},
                 {"rank", lat.rank}};
    if (ee.offending_translation) payload["offending_translation"] = *ee.offending_translation;
    return report_shell("lattice check-ee", Json{{"lattice", content_hash(lattice_json)}}, payload, watch);
}

Json lattice_abelian_cover(const Json& seed_graph_json) {
    Stopwatch watch;
    MultiGraph seed = graph_from_json(seed_graph_json);
    PeriodicLattice cover = maximal_abelian_cover(seed);
    Json payload{{"rank", cover.rank},
                 {"rank_formula", "1 - |X0| + |E0|/2"},
                 {"lattice", lattice_to_json(cover)}};
    return report_shell("lattice abelian-cover", Json{{"seed", content_hash(seed_graph_json)}}, payload,
                        watch);
}

Json interaction_analyze(const Json& interaction_json, int locale_max, long long cap, int threads) {
    Stopwatch watch;
    Interaction in = interaction_from_json(interaction_json);
    Json payload;
    auto violations = validate_interaction(in);
    payload["valid"] = violations.empty();
    if (!violations.empty()) {
        Json list = Json::array();
        for (const auto& v : violations)
            list.push_back(Json{{"pair", {in.state_names[v.s1], in.state_names[v.s2]}}, {"message", v.message}});
        payload["violations"] = list;
        return report_shell("interaction analyze", Json{{"interaction", content_hash(interaction_json)}},
                            payload, watch);
    }
    auto basis = conserved_basis(in);
    Json basis_json = Json::array();
    for (const auto& xi : basis) basis_json.push_back(conserved_quantity_to_json(xi, in));
    payload["c_phi"] = basis.size();
    payload["conserved_basis"] = basis_json;
    auto simple = is_simple(in, basis);
    payload["simple"] = simple.simple;
    payload["simple_detail"] = simple.detail;
    payload["near_miss_semigroup"] = simple.near_miss_semigroup;
    auto family = default_locale_family(locale_max);
    auto evidence = irreducibility_evidence(in, basis, family, cap, threads);
    Json locales = Json::array();
    for (const auto& loc : evidence.locales)
        locales.push_back(Json{{"locale", loc.locale_name},
                               {"configs", loc.num_configs},
                               {"charge_classes", loc.num_charge_classes},
                               {"components", loc.num_components},
                               {"pass", loc.pass}});
    payload["irreducibility"] = Json{{"verdict", evidence.all_pass ? "evidence" : "fail"},
                                     {"all_pass", evidence.all_pass},
                                     {"locales", locales},
                                     {"note", "bounded evidence only, never a proof for all locales"}};
    return report_shell("interaction analyze", Json{{"interaction", content_hash(interaction_json)}},
                        payload, watch);
}

Json decompose_run(const DecomposeRequest& request) {
    Stopwatch watch;
    PeriodicLattice lat = lattice_of(request.lattice);
    Interaction in = interaction_from_json(request.interaction);
    System sys(std::move(lat), std::move(in));
    OrbitDataForm omega = form_from_json(request.form, sys);
    omega.validate_alternating(request.cap);

    DecomposeOptions opts;
    opts.charge_sites = request.charge_sites;
    opts.pattern_cap = request.cap;
    opts.expand_radius = request.expand_radius;
    opts.rng_seed = request.rng_seed;

    CellBox box;
    if (request.window_halfwidths.empty()) {
        box = recommended_box(sys, omega.radius(), opts);
    } else {
        if (static_cast<int>(request.window_halfwidths.size()) != sys.lattice.rank)
            throw InputError("decompose: --window needs one half-width per lattice axis");
        for (int h : request.window_halfwidths) {
            if (h < 1) throw InputError("decompose: window half-widths must be positive");
            box.range.push_back({-h, h});
        }
    }
    auto w = make_window(sys.lattice, box);
    auto res = decompose(sys, omega, w, opts);
    Json inputs{{"lattice", content_hash(request.lattice)},
                {"interaction", content_hash(request.interaction)},
                {"form", content_hash(request.form)}};
    return report_shell("decompose", inputs, decomposition_to_json(res, sys), watch);
}

Json verify_run(const std::vector<int>& suites, const std::string& scale, int threads) {
    Stopwatch watch;
    auto results = verify::run_criteria(suites, scale, threads);
    Json list = Json::array();
    bool all = true;
    for (const auto& r : results) {
        all = all && r.pass;
        list.push_back(Json{{"id", r.id}, {"name", r.name}, {"pass", r.pass}, {"details", r.details}});
    }
    Json payload{{"all_pass", all}, {"scale", scale}, {"criteria", list}};
    return report_shell("verify", Json{{"scale", scale}}, payload, watch);
}

}  // namespace crystalforms::api
