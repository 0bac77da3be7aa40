#include "crystalforms/serialize.hpp"

#include <fstream>

namespace crystalforms {

namespace {

Cell cell_from_json(const Json& j) {
    if (!j.is_array()) throw InputError("expected an integer array for a cell");
    Cell c;
    for (const auto& v : j) c.push_back(v.get<int>());
    return c;
}

LatticeVertex vertex_from_json(const Json& j, int rank) {
    LatticeVertex v;
    v.base = j.at("base").get<int>();
    v.cell = cell_from_json(j.at("cell"));
    if (static_cast<int>(v.cell.size()) != rank) throw InputError("vertex cell has wrong dimension");
    return v;
}

Json vertex_to_json(const LatticeVertex& v) { return Json{{"base", v.base}, {"cell", v.cell}}; }

}  // namespace

Json graph_to_json(const MultiGraph& g) {
    Json edges = Json::array();
    for (int e = 0; e < g.num_edges(); ++e)
        edges.push_back(Json{{"id", e}, {"origin", g.origin[e]}, {"target", g.target[e]}, {"inverse", g.inverse[e]}});
    return Json{{"vertices", g.num_vertices}, {"edges", edges}, {"strictly_symmetric", g.strictly_symmetric}};
}

MultiGraph graph_from_json(const Json& j) {
    MultiGraph g;
    g.num_vertices = j.at("vertices").get<int>();
    g.strictly_symmetric = j.value("strictly_symmetric", false);
    const auto& edges = j.at("edges");
    g.origin.assign(edges.size(), 0);
    g.target.assign(edges.size(), 0);
    g.inverse.assign(edges.size(), 0);
    for (const auto& e : edges) {
        int id = e.at("id").get<int>();
        if (id < 0 || id >= static_cast<int>(edges.size())) throw InputError("graph: edge id out of range");
        g.origin[id] = e.at("origin").get<int>();
        g.target[id] = e.at("target").get<int>();
        g.inverse[id] = e.at("inverse").get<int>();
    }
    g.finalize();
    return g;
}

Json lattice_to_json(const PeriodicLattice& lat) {
    Json orbits = Json::array();
    for (int e = 0; e < lat.seed.num_edges(); ++e)
        orbits.push_back(Json{{"edge", e}, {"translation", lat.translations[e]}});
    Json fd = Json::array();
    for (int b = 0; b < lat.num_bases(); ++b) fd.push_back(b);
    return Json{{"rank", lat.rank},       {"seed", graph_to_json(lat.seed)}, {"orbits", orbits},
                {"fundamental_domain", fd}, {"generators", lat.generator_names}, {"name", lat.name}};
}

PeriodicLattice lattice_from_json(const Json& j) {
    PeriodicLattice lat;
    lat.rank = j.at("rank").get<int>();
    lat.seed = graph_from_json(j.at("seed"));
    lat.translations.assign(lat.seed.num_edges(), Cell(lat.rank, 0));
    for (const auto& o : j.at("orbits")) {
        int e = o.at("edge").get<int>();
        if (e < 0 || e >= lat.seed.num_edges()) throw InputError("lattice: orbit edge id out of range");
        lat.translations[e] = cell_from_json(o.at("translation"));
    }
    if (j.contains("generators"))
        lat.generator_names = j.at("generators").get<std::vector<std::string>>();
    else
        for (int g = 1; g <= lat.rank; ++g) lat.generator_names.push_back("sigma_" + std::to_string(g));
    lat.name = j.value("name", std::string("custom"));
    lat.validate();
    return lat;
}

Json interaction_to_json(const Interaction& in) {
    Json phi = Json::array();
    for (int s1 = 0; s1 < in.num_states(); ++s1)
        for (int s2 = 0; s2 < in.num_states(); ++s2) {
            auto [a, b] = in.apply(s1, s2);
            if (a == s1 && b == s2) continue;
            phi.push_back(Json{{"in", {in.state_names[s1], in.state_names[s2]}},
                               {"out", {in.state_names[a], in.state_names[b]}}});
        }
    return Json{{"states", in.state_names}, {"base", in.state_names[in.base]}, {"phi", phi}};
}

Interaction interaction_from_json(const Json& j) {
    Interaction in;
    in.state_names = j.at("states").get<std::vector<std::string>>();
    if (in.state_names.empty()) throw InputError("interaction: empty state list");
    in.base = in.state_index(j.at("base").get<std::string>());
    const int n = in.num_states();
    in.table.resize(n * n);
    for (int s1 = 0; s1 < n; ++s1)
        for (int s2 = 0; s2 < n; ++s2) in.table[s1 * n + s2] = {s1, s2};  // unlisted pairs are fixed
    for (const auto& rule : j.at("phi")) {
        const auto& from = rule.at("in");
        const auto& to = rule.at("out");
        if (from.size() != 2 || to.size() != 2) throw InputError("interaction: phi rule arity");
        int s1 = in.state_index(from[0].get<std::string>());
        int s2 = in.state_index(from[1].get<std::string>());
        in.table[s1 * n + s2] = {in.state_index(to[0].get<std::string>()), in.state_index(to[1].get<std::string>())};
    }
    return in;
}

Json configuration_to_json(const Configuration& c, const Interaction& in) {
    Json sites = Json::array();
    for (const auto& [v, s] : c.sites)
        sites.push_back(Json{{"vertex", vertex_to_json(v)}, {"state", in.state_names[s]}});
    return Json{{"sites", sites}};
}

Configuration configuration_from_json(const Json& j, const Interaction& in, int rank) {
    std::vector<std::pair<LatticeVertex, int>> raw;
    for (const auto& site : j.at("sites"))
        raw.emplace_back(vertex_from_json(site.at("vertex"), rank), in.state_index(site.at("state").get<std::string>()));
    return Configuration::of(std::move(raw), in.base);
}

Json form_to_json(const OrbitDataForm& form, const Interaction& in) {
    Json orbit_data = Json::array();
    for (std::size_t e = 0; e < form.entries().size(); ++e) {
        Json entries = Json::array();
        for (const auto& [pattern, value] : form.entries()[e])
            entries.push_back(Json{{"pattern", configuration_to_json(pattern, in)}, {"value", rat_to_string(value)}});
        orbit_data.push_back(Json{{"edge_orbit", static_cast<int>(e)}, {"entries", entries}});
    }
    return Json{{"radius", form.radius()}, {"orbit_data", orbit_data}};
}

OrbitDataForm form_from_json(const Json& j, const System& sys) {
    int radius = j.at("radius").get<int>();
    std::vector<std::map<Configuration, Rat>> entries(sys.lattice.seed.num_edges());
    for (const auto& orbit : j.at("orbit_data")) {
        int e = orbit.at("edge_orbit").get<int>();
        if (e < 0 || e >= sys.lattice.seed.num_edges()) throw InputError("form: edge orbit id out of range");
        for (const auto& entry : orbit.at("entries")) {
            Configuration pattern =
                configuration_from_json(entry.at("pattern"), sys.interaction, sys.lattice.rank);
            entries[e][pattern] = rat_from_string(entry.at("value").get<std::string>());
        }
    }
    return OrbitDataForm(sys, radius, std::move(entries));
}

Json uniform_function_to_json(const UniformFunction& f, const Interaction& in) {
    Json terms = Json::array();
    for (const auto& t : f.terms) {
        Json support = Json::array();
        for (const auto& v : t.support) support.push_back(vertex_to_json(v));
        Json table = Json::array();
        for (const auto& [states, value] : t.table) {
            Json pattern = Json::array();
            for (int s : states) pattern.push_back(in.state_names[s]);
            table.push_back(Json{{"pattern", pattern}, {"value", rat_to_string(value)}});
        }
        terms.push_back(Json{{"support", support}, {"table", table}, {"vanishing", t.vanishing}});
    }
    return Json{{"radius", f.radius},
                {"block_metric", f.block_metric},
                {"shift_invariant", f.shift_invariant},
                {"terms", terms}};
}

Json conserved_quantity_to_json(const ConservedQuantity& q, const Interaction& in) {
    Json values = Json::object();
    for (int s = 0; s < in.num_states(); ++s) values[in.state_names[s]] = rat_to_string(q(s));
    return values;
}

Json decomposition_to_json(const DecompositionResult& res, const System& sys) {
    Json zetas = Json::array();
    for (const auto& z : res.zetas) zetas.push_back(conserved_quantity_to_json(z, sys.interaction));
    Json certificate = Json::array();
    for (const auto& entry : res.certificate)
        certificate.push_back(Json{{"config", configuration_to_json(entry.transition.config, sys.interaction)},
                                   {"edge_orbit", entry.transition.edge.seed_edge},
                                   {"anchor", entry.transition.edge.anchor},
                                   {"residual", rat_to_string(entry.residual)}});
    Json table = Json::array();
    for (const auto& [key, value] : res.table_f.values) {
        Json alpha = Json::array(), beta = Json::array();
        for (const auto& v : key.first) alpha.push_back(rat_to_string(v));
        for (const auto& v : key.second) beta.push_back(rat_to_string(v));
        Json entry{{"alpha", alpha}, {"beta", beta}, {"value", rat_to_string(value)}};
        auto prov = res.table_f.provenance.find(key);
        if (prov != res.table_f.provenance.end()) {
            entry["ball_1"] = Json{{"center", prov->second.d1.center}, {"radius", prov->second.d1.radius}};
            entry["ball_2"] = Json{{"center", prov->second.d2.center}, {"radius", prov->second.d2.radius}};
        }
        table.push_back(entry);
    }
    Json h = Json::array();
    for (const auto& [charge, value] : res.h.values) {
        Json c = Json::array();
        for (const auto& v : charge) c.push_back(rat_to_string(v));
        h.push_back(Json{{"charge", c}, {"value", rat_to_string(value)}});
    }
    Json window = Json::array();
    for (const auto& [lo, hi] : res.window_box.range) window.push_back(Json{lo, hi});
    const char* kind = res.split_kind == MonoidKind::SymmetricSystem
                           ? "symmetric_system"
                           : (res.split_kind == MonoidKind::MonoidN ? "monoid_N" : "monoid_Z");
    return Json{{"g", uniform_function_to_json(res.g_orbit, sys.interaction)},
                {"zetas", zetas},
                {"certificate", certificate},
                {"certificate_ok", res.certificate_ok},
                {"pairing_of_g_vanishes", res.pairing_of_g_vanishes},
                {"g_shift_invariant", res.g_shift_invariant},
                {"expansion_consistent", res.expansion_consistent},
                {"pairing_table", table},
                {"splitting", h},
                {"split_kind", kind},
                {"separation_radius", res.separation_radius},
                {"charge_sites", res.charge_sites},
                {"used_ee_equivalent", res.used_ee_equivalent},
                {"equivalence_constants", Json{{"C", res.transport.c}, {"C_prime", res.transport.c_prime}}},
                {"window", window},
                {"fundamental_domain", res.fundamental_domain}};
}

Json load_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw InputError("cannot open file '" + path + "'");
    Json j;
    try {
        in >> j;
    } catch (const std::exception& e) {
        throw InputError("malformed JSON in '" + path + "': " + e.what());
    }
    return j;
}

void save_json_file(const std::string& path, const Json& j) {
    std::ofstream out(path);
    if (!out) throw InputError("cannot write file '" + path + "'");
    out << j.dump(2) << "\n";
}

}  // namespace crystalforms
