// Acceptance suite: one line per criterion, nonzero exit on any failure.

#include <cstdio>
#include <cstring>
#include <string>

#include "crystalforms/api.hpp"
#include "crystalforms/verify.hpp"

int main(int argc, char** argv) {
    std::string scale = "small";
    for (int i = 1; i < argc; ++i) {
        if (std::strcmp(argv[i], "--scale") == 0 && i + 1 < argc) scale = argv[++i];
    }
    int threads = 1;
    try {
        threads = crystalforms::api::threads_from_env();
    } catch (const std::exception& e) {
        std::fprintf(stderr, "%s\n", e.what());
        return 2;
    }
    int failures = 0;
    std::size_t total = 0;
    try {
        auto results = crystalforms::verify::run_criteria({}, scale, threads);
        total = results.size();
        for (const auto& r : results) {
            std::printf("[%s] criterion %d (%s): %s\n", r.pass ? "PASS" : "FAIL", r.id, r.name.c_str(),
                        r.details.c_str());
            std::fflush(stdout);
            if (!r.pass) ++failures;
        }
    } catch (const std::exception& e) {
        std::fprintf(stderr, "acceptance run aborted: %s\n", e.what());
        return 2;
    }
    std::printf("%zu/%zu criteria passed\n", total - failures, total);
    return failures == 0 ? 0 : 1;
}
