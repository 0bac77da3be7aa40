#include <CLI11.hpp>
#include <iostream>

#include "crystalforms/api.hpp"

namespace {

using namespace crystalforms;

// Exit codes: 0 success, 1 suite failure, 2 input/validation error,
// 3 inconclusive (window or cap too small).
constexpr int kOk = 0;
constexpr int kSuiteFail = 1;
constexpr int kInputError = 2;
constexpr int kInconclusive = 3;

struct OutputOptions {
    bool json = false;
    std::string out_path;
};

// Reports go to stdout without the timing field so identical inputs give
// byte-identical output; the timing is a stderr diagnostic.
void emit(Json report, const OutputOptions& opts,
          const std::function<void(const Json&)>& human = nullptr) {
    long long ms = report.value("timing_ms", 0LL);
    report.erase("timing_ms");
    std::cerr << report.value("command", std::string("command")) << ": " << ms << " ms\n";
    if (!opts.out_path.empty()) save_json_file(opts.out_path, report);
    if (opts.json || !human) {
        if (opts.out_path.empty()) std::cout << report.dump(2) << "\n";
    } else {
        human(report.at("report"));
    }
}

std::vector<int> parse_int_list(const std::string& csv) {
    std::vector<int> out;
    std::string cur;
    for (char c : csv + ",") {
        if (c == ',') {
            if (!cur.empty()) out.push_back(std::stoi(cur));
            cur.clear();
        } else {
            cur += c;
        }
    }
    return out;
}

Json lattice_request(const std::string& builtin, const std::string& params_csv,
                     const std::string& lattice_path) {
    if (!builtin.empty()) {
        Json req{{"builtin", builtin}};
        if (!params_csv.empty()) req["params"] = parse_int_list(params_csv);
        return req;
    }
    if (!lattice_path.empty()) return load_json_file(lattice_path);
    throw InputError("provide either --builtin NAME or --lattice FILE");
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"crystalforms: exact decomposition of shift-invariant closed uniform forms on crystal lattices"};
    app.require_subcommand(1);

    OutputOptions out;

    // ------------------------------------------------------------ lattice
    auto* lattice = app.add_subcommand("lattice", "build, inspect and classify periodic lattices");
    lattice->require_subcommand(1);
    std::string builtin, params_csv, lattice_path, seed_path;

    auto add_lattice_source = [&](CLI::App* cmd) {
        cmd->add_option("--builtin", builtin, "builtin lattice name (euclidean, euclidean_nearest_n, hexagonal, triangular, diamond)");
        cmd->add_option("--params", params_csv, "builtin parameters, comma separated");
        cmd->add_option("--lattice", lattice_path, "lattice JSON file");
        cmd->add_flag("--json", out.json, "print the full JSON report");
        cmd->add_option("--out", out.out_path, "write the JSON report to a file");
    };

    auto* build = lattice->add_subcommand("build", "construct a lattice and emit its JSON presentation");
    add_lattice_source(build);
    auto* inspect = lattice->add_subcommand("inspect", "summarize a lattice presentation");
    add_lattice_source(inspect);
    auto* checkee = lattice->add_subcommand("check-ee", "essentially-Euclidean classification");
    add_lattice_source(checkee);
    auto* cover = lattice->add_subcommand("abelian-cover", "maximal abelian cover of a seed crystal");
    cover->add_option("seed", seed_path, "seed crystal graph JSON")->required();
    cover->add_flag("--json", out.json, "print the full JSON report");
    cover->add_option("--out", out.out_path, "write the JSON report to a file");

    // -------------------------------------------------------- interaction
    auto* interaction = app.add_subcommand("interaction", "analyze interactions");
    interaction->require_subcommand(1);
    auto* analyze = interaction->add_subcommand("analyze", "validate, conserved basis, simplicity, irreducibility evidence");
    std::string interaction_path;
    int locale_max = 4;
    long long cap = 1'000'000;
    analyze->add_option("file", interaction_path, "interaction JSON file")->required();
    analyze->add_option("--locale-max", locale_max, "largest path/cycle size in the evidence family");
    analyze->add_option("--cap", cap, "configuration-count cap per locale");
    analyze->add_flag("--json", out.json, "print the full JSON report");
    analyze->add_option("--out", out.out_path, "write the JSON report to a file");

    // ---------------------------------------------------------- decompose
    auto* dec = app.add_subcommand("decompose", "decompose a shift-invariant closed uniform form");
    std::string dec_lattice, dec_interaction, dec_form, window_csv;
    api::DecomposeRequest req;
    dec->add_option("--lattice", dec_lattice, "lattice JSON file")->required();
    dec->add_option("--interaction", dec_interaction, "interaction JSON file")->required();
    dec->add_option("--form", dec_form, "form JSON file")->required();
    dec->add_option("--window", window_csv, "window half-widths per axis, comma separated");
    dec->add_option("--charge-sites", req.charge_sites, "site budget for the pairing table");
    dec->add_option("--radius", req.expand_radius, "block radius of the emitted orbit expansion");
    dec->add_option("--cap", req.cap, "pattern/state cap");
    dec->add_option("--seed", req.rng_seed, "seed for sampled checks");
    dec->add_flag("--json", out.json, "print the full JSON report");
    dec->add_option("--out", out.out_path, "write the result JSON to a file");

    // ------------------------------------------------------------- verify
    auto* verify_cmd = app.add_subcommand("verify", "run the verification suites");
    std::string suites_csv = "all", scale = "small";
    verify_cmd->add_option("--suite", suites_csv, "criteria ids (comma separated) or 'all'");
    verify_cmd->add_option("--scale", scale, "problem scale: small or smoke");
    verify_cmd->add_flag("--json", out.json, "print the full JSON report");
    verify_cmd->add_option("--out", out.out_path, "write the JSON report to a file");

    CLI11_PARSE(app, argc, argv);

    try {
        int threads = api::threads_from_env();

        if (build->parsed()) {
            emit(api::lattice_build(lattice_request(builtin, params_csv, lattice_path)), out,
                 [](const Json& rep) { std::cout << rep.at("lattice").dump(2) << "\n"; });
            return kOk;
        }
        if (inspect->parsed()) {
            emit(api::lattice_inspect(lattice_request(builtin, params_csv, lattice_path)), out,
                 [](const Json& rep) {
                     std::cout << "name: " << rep.at("name").get<std::string>() << "\n"
                               << "rank: " << rep.at("rank") << "\n"
                               << "seed: " << rep.at("seed_vertices") << " vertices, " << rep.at("seed_edges")
                               << " edges\n"
                               << "essentially_euclidean: " << rep.at("essentially_euclidean") << "\n";
                 });
            return kOk;
        }
        if (checkee->parsed()) {
            emit(api::lattice_check_ee(lattice_request(builtin, params_csv, lattice_path)), out,
                 [](const Json& rep) {
                     std::cout << "essentially_euclidean: " << rep.at("essentially_euclidean") << "\n"
                               << "rank_certified: " << rep.at("rank_certified") << "\n";
                 });
            return kOk;
        }
        if (cover->parsed()) {
            emit(api::lattice_abelian_cover(load_json_file(seed_path)), out, [](const Json& rep) {
                std::cout << "rank: " << rep.at("rank") << "  (" << rep.at("rank_formula").get<std::string>()
                          << ")\n";
            });
            return kOk;
        }
        if (analyze->parsed()) {
            Json report = api::interaction_analyze(load_json_file(interaction_path), locale_max, cap, threads);
            bool valid = report.at("report").at("valid").get<bool>();
            emit(report, out, [](const Json& rep) {
                std::cout << "valid: " << rep.at("valid") << "\n";
                if (!rep.at("valid").get<bool>()) {
                    std::cout << "violations: " << rep.at("violations").dump() << "\n";
                    return;
                }
                std::cout << "c_phi: " << rep.at("c_phi") << "\n"
                          << "simple: " << rep.at("simple") << "\n"
                          << "irreducibility: " << rep.at("irreducibility").at("verdict").get<std::string>()
                          << "\n";
            });
            return valid ? kOk : kInputError;
        }
        if (dec->parsed()) {
            req.lattice = load_json_file(dec_lattice);
            req.interaction = load_json_file(dec_interaction);
            req.form = load_json_file(dec_form);
            if (!window_csv.empty()) req.window_halfwidths = parse_int_list(window_csv);
            Json report = api::decompose_run(req);
            bool ok = report.at("report").at("certificate_ok").get<bool>() &&
                      report.at("report").at("pairing_of_g_vanishes").get<bool>() &&
                      report.at("report").at("g_shift_invariant").get<bool>();
            emit(report, out, [](const Json& rep) {
                std::cout << "zetas: " << rep.at("zetas").dump() << "\n"
                          << "certificate_ok: " << rep.at("certificate_ok") << "\n"
                          << "g terms: " << rep.at("g").at("terms").size() << "\n";
            });
            return ok ? kOk : kSuiteFail;
        }
        if (verify_cmd->parsed()) {
            std::vector<int> ids;
            if (suites_csv != "all") ids = parse_int_list(suites_csv);
            Json report = api::verify_run(ids, scale, threads);
            bool all = report.at("report").at("all_pass").get<bool>();
            emit(report, out, [](const Json& rep) {
                for (const auto& c : rep.at("criteria"))
                    std::cout << (c.at("pass").get<bool>() ? "[PASS] " : "[FAIL] ") << "criterion "
                              << c.at("id") << " (" << c.at("name").get<std::string>() << "): "
                              << c.at("details").get<std::string>() << "\n";
                std::cout << (rep.at("all_pass").get<bool>() ? "ALL PASS" : "FAILURES PRESENT") << "\n";
            });
            return all ? kOk : kSuiteFail;
        }
    } catch (const InconclusiveError& e) {
        std::cerr << "inconclusive: " << e.what() << "\n";
        return kInconclusive;
    } catch (const CapError& e) {
        std::cerr << "cap exceeded: " << e.what() << "\n";
        return kInconclusive;
    } catch (const InputError& e) {
        std::cerr << "input error: " << e.what() << "\n";
        return kInputError;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kSuiteFail;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kSuiteFail;
    }
    return kInputError;
}
