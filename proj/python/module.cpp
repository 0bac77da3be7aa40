#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "crystalforms/api.hpp"

namespace py = pybind11;
using namespace crystalforms;

namespace {

// The python layer exchanges JSON strings; the package wraps them in
// dicts. Keeps the binding thin and the wire format identical to the CLI.
std::string lattice_build_json(const std::string& request) {
    return api::lattice_build(Json::parse(request)).dump();
}

std::string lattice_inspect_json(const std::string& lattice) {
    return api::lattice_inspect(Json::parse(lattice)).dump();
}

std::string lattice_check_ee_json(const std::string& lattice) {
    return api::lattice_check_ee(Json::parse(lattice)).dump();
}

std::string abelian_cover_json(const std::string& seed_graph) {
    return api::lattice_abelian_cover(Json::parse(seed_graph)).dump();
}

std::string interaction_analyze_json(const std::string& interaction, int locale_max, long long cap,
                                     int threads) {
    return api::interaction_analyze(Json::parse(interaction), locale_max, cap, threads).dump();
}

std::string decompose_json(const std::string& lattice, const std::string& interaction,
                           const std::string& form, const std::vector<int>& window, int charge_sites,
                           long long cap, int expand_radius, unsigned rng_seed) {
    api::DecomposeRequest req;
    req.lattice = Json::parse(lattice);
    req.interaction = Json::parse(interaction);
    req.form = Json::parse(form);
    req.window_halfwidths = window;
    req.charge_sites = charge_sites;
    req.cap = cap;
    req.expand_radius = expand_radius;
    req.rng_seed = rng_seed;
    return api::decompose_run(req).dump();
}

std::string verify_json(const std::vector<int>& suites, const std::string& scale, int threads) {
    return api::verify_run(suites, scale, threads).dump();
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Exact Varadhan decomposition of shift-invariant closed uniform forms on crystal lattices";
    m.attr("__version__") = api::kVersion;

    py::register_exception<InputError>(m, "InputError");
    py::register_exception<InconclusiveError>(m, "InconclusiveError");
    py::register_exception<CapError>(m, "CapError");

    m.def("lattice_build", &lattice_build_json, py::arg("request"),
          "Build a lattice from a JSON request ({'builtin': name, 'params': [...]} or a presentation).");
    m.def("lattice_inspect", &lattice_inspect_json, py::arg("lattice"));
    m.def("lattice_check_ee", &lattice_check_ee_json, py::arg("lattice"),
          "Essentially-Euclidean classification of a lattice presentation.");
    m.def("abelian_cover", &abelian_cover_json, py::arg("seed_graph"),
          "Maximal abelian cover of a seed crystal graph.");
    m.def("interaction_analyze", &interaction_analyze_json, py::arg("interaction"),
          py::arg("locale_max") = 4, py::arg("cap") = 1'000'000LL, py::arg("threads") = 1);
    m.def("decompose", &decompose_json, py::arg("lattice"), py::arg("interaction"), py::arg("form"),
          py::arg("window") = std::vector<int>{}, py::arg("charge_sites") = 3,
          py::arg("cap") = 2'000'000LL, py::arg("expand_radius") = -1, py::arg("rng_seed") = 20240,
          py::call_guard<py::gil_scoped_release>());
    m.def("verify", &verify_json, py::arg("suites") = std::vector<int>{}, py::arg("scale") = "small",
          py::arg("threads") = 1, py::call_guard<py::gil_scoped_release>());
}
