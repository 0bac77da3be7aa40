#pragma once

#include "crystalforms/serialize.hpp"
#include "crystalforms/verify.hpp"

namespace crystalforms::api {

// JSON-in / JSON-out command layer shared by the CLI and the python
// bindings. Every report carries the command name, input hashes, the
// tool version and wall time.

inline constexpr const char* kVersion = "0.1.0";

Json lattice_build(const Json& request);                // {"builtin": name, "params": [...]} or a lattice
Json lattice_inspect(const Json& lattice_json);
Json lattice_check_ee(const Json& lattice_json);
Json lattice_abelian_cover(const Json& seed_graph_json);

Json interaction_analyze(const Json& interaction_json, int locale_max, long long cap, int threads);

struct DecomposeRequest {
    Json lattice;
    Json interaction;
    Json form;
    std::vector<int> window_halfwidths;
    int charge_sites = 3;
    long long cap = 2'000'000;
    int expand_radius = -1;
    unsigned rng_seed = 20240;
};

Json decompose_run(const DecomposeRequest& request);

Json verify_run(const std::vector<int>& suites, const std::string& scale, int threads);

int threads_from_env();

}  // namespace crystalforms::api
