#pragma once

#include <string>
#include <vector>

namespace crystalforms::verify {

struct CriterionResult {
    int id = 0;
    std::string name;
    bool pass = false;
    std::string details;
};

// Runs the numbered verification criteria (all of them when ids is
// empty). scale selects the problem sizes: "small" is the reference
// desk-scale run, "smoke" a faster subset-sized variant.
std::vector<CriterionResult> run_criteria(const std::vector<int>& ids = {},
                                          const std::string& scale = "small", int threads = 1);

}  // namespace crystalforms::verify
