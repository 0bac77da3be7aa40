// End-to-end checks of the command line tool: exit codes, wire formats,
// byte stability. The binary path arrives as argv[1].

#define DOCTEST_CONFIG_IMPLEMENT
#include <doctest.h>

#include <cstdlib>
#include <fstream>
#include <sstream>

#include "crystalforms/fixtures.hpp"
#include "crystalforms/serialize.hpp"

namespace {

std::string g_binary;
std::string g_dir;

struct RunResult {
    int exit_code = -1;
    std::string out;
};

RunResult run(const std::string& args) {
    std::string out_file = g_dir + "/stdout.txt";
    std::string cmd = g_binary + " " + args + " > " + out_file + " 2>" + g_dir + "/stderr.txt";
    int rc = std::system(cmd.c_str());
    RunResult r;
    r.exit_code = WEXITSTATUS(rc);
    std::ifstream in(out_file);
    std::stringstream ss;
    ss << in.rdbuf();
    r.out = ss.str();
    return r;
}

std::string write_file(const std::string& name, const crystalforms::Json& j) {
    std::string path = g_dir + "/" + name;
    crystalforms::save_json_file(path, j);
    return path;
}

}  // namespace

using namespace crystalforms;

TEST_CASE("lattice check-ee verdicts") {
    auto hex = run("lattice check-ee --builtin hexagonal");
    CHECK(hex.exit_code == 0);
    CHECK(hex.out.find("essentially_euclidean: true") != std::string::npos);

    auto tri = run("lattice check-ee --builtin triangular");
    CHECK(tri.exit_code == 0);
    CHECK(tri.out.find("essentially_euclidean: false") != std::string::npos);

    auto missing = run("lattice check-ee");
    CHECK(missing.exit_code == 2);
}

TEST_CASE("lattice build round trips through files") {
    std::string path = g_dir + "/e2.json";
    auto build = run("lattice build --builtin euclidean --params 2 --json --out " + path);
    CHECK(build.exit_code == 0);
    Json report = load_json_file(path);
    PeriodicLattice lat = lattice_from_json(report.at("report").at("lattice"));
    CHECK(lat.rank == 2);

    // Feed the emitted lattice back in.
    std::string lat_path = write_file("e2_lattice.json", lattice_to_json(lat));
    auto check = run("lattice check-ee --lattice " + lat_path);
    CHECK(check.exit_code == 0);
    CHECK(check.out.find("essentially_euclidean: true") != std::string::npos);
}

TEST_CASE("abelian cover of the hexagonal seed") {
    std::string seed = write_file("hexseed.json", graph_to_json(builtin_lattice("hexagonal").seed));
    auto r = run("lattice abelian-cover " + seed);
    CHECK(r.exit_code == 0);
    CHECK(r.out.find("rank: 2") != std::string::npos);

    std::string tree = write_file("tree.json", graph_to_json(path_graph(3)));
    CHECK(run("lattice abelian-cover " + tree).exit_code == 2);
}

TEST_CASE("interaction analyze") {
    std::string excl = write_file("exclusion.json", interaction_to_json(exclusion_interaction()));
    auto r = run("interaction analyze " + excl + " --json");
    CHECK(r.exit_code == 0);
    Json report = Json::parse(r.out);
    CHECK(report.at("report").at("c_phi") == 1);
    CHECK(report.at("report").at("simple") == true);
    CHECK(report.at("report").at("irreducibility").at("all_pass") == true);

    std::string ident = write_file("identity.json", interaction_to_json(identity_interaction(2)));
    auto rid = run("interaction analyze " + ident + " --json");
    CHECK(rid.exit_code == 0);
    CHECK(Json::parse(rid.out).at("report").at("irreducibility").at("all_pass") == false);

    // A malformed table exits with the input-error code and diagnostics.
    Interaction broken = exclusion_interaction();
    broken.table[0 * 2 + 1] = {0, 0};
    std::string bad = write_file("broken.json", interaction_to_json(broken));
    auto rbad = run("interaction analyze " + bad + " --json");
    CHECK(rbad.exit_code == 2);
    CHECK(Json::parse(rbad.out).at("report").at("valid") == false);
}

TEST_CASE("decompose the zero form end to end") {
    System sys(builtin_lattice("euclidean", {1}), exclusion_interaction());
    std::string lat = write_file("e1.json", lattice_to_json(sys.lattice));
    std::string inter = write_file("excl.json", interaction_to_json(sys.interaction));
    OrbitDataForm zero(sys, 1, std::vector<std::map<Configuration, Rat>>(sys.lattice.seed.num_edges()));
    std::string form = write_file("zero_form.json", form_to_json(zero, sys.interaction));

    std::string out = g_dir + "/result.json";
    auto r = run("decompose --lattice " + lat + " --interaction " + inter + " --form " + form +
                 " --charge-sites 2 --out " + out);
    CHECK(r.exit_code == 0);
    Json result = load_json_file(out).at("report");
    CHECK(result.at("certificate_ok") == true);
    for (const auto& z : result.at("zetas"))
        for (const auto& [state, value] : z.items()) CHECK(value.get<std::string>() == "0");
    CHECK(result.at("g").at("terms").empty());

    // Too small a window is inconclusive (exit 3).
    auto small = run("decompose --lattice " + lat + " --interaction " + inter + " --form " + form +
                     " --window 3 --charge-sites 2");
    CHECK(small.exit_code == 3);
}

TEST_CASE("verify subcommand prints a pass table") {
    auto r = run("verify --suite 1,2 --scale small");
    CHECK(r.exit_code == 0);
    CHECK(r.out.find("[PASS] criterion 1") != std::string::npos);
    CHECK(r.out.find("[PASS] criterion 2") != std::string::npos);
    CHECK(r.out.find("ALL PASS") != std::string::npos);
}

TEST_CASE("outputs are byte-stable") {
    auto a = run("lattice inspect --builtin hexagonal --json");
    auto b = run("lattice inspect --builtin hexagonal --json");
    CHECK(a.exit_code == 0);
    CHECK(a.out == b.out);
}

TEST_CASE("VARADHAN_THREADS must be positive") {
    auto r = run("verify --suite 1 --scale small 2>/dev/null; true");
    (void)r;
    std::string cmd = "VARADHAN_THREADS=0 " + g_binary + " verify --suite 1 > /dev/null 2>&1";
    CHECK(WEXITSTATUS(std::system(cmd.c_str())) == 2);
    cmd = "VARADHAN_THREADS=2 " + g_binary + " verify --suite 10 --scale small > " + g_dir +
          "/threads.txt 2>/dev/null";
    CHECK(WEXITSTATUS(std::system(cmd.c_str())) == 0);
}

int main(int argc, char** argv) {
    if (argc < 2) {
        std::fprintf(stderr, "usage: cli_tests <path-to-crystalforms-binary>\n");
        return 2;
    }
    g_binary = argv[1];
    char tmpl[] = "/tmp/crystalforms_cli_XXXXXX";
    if (!mkdtemp(tmpl)) return 2;
    g_dir = tmpl;
    doctest::Context ctx;
    ctx.applyCommandLine(1, argv);
    return ctx.run();
}
