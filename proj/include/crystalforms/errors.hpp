#pragma once

#include <stdexcept>
#include <string>

namespace crystalforms {

// Error taxonomy mirrors the CLI exit codes:
//   InputError       -> exit 2 (malformed or invalid input data)
//   InconclusiveError-> exit 3 (window/cap too small to decide)
//   CapError         -> exit 3 (state-space budget exceeded)
//   InternalError    -> exit 1 (invariant violated; carries a witness)
struct Error : std::runtime_error {
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

struct InputError : Error {
    explicit InputError(const std::string& msg) : Error(msg) {}
};

struct InconclusiveError : Error {
    explicit InconclusiveError(const std::string& msg) : Error(msg) {}
};

struct CapError : Error {
    explicit CapError(const std::string& msg) : Error(msg) {}
};

struct InternalError : Error {
    explicit InternalError(const std::string& msg) : Error(msg) {}
};

}  // namespace crystalforms
