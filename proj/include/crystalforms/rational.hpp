#pragma once

#include <gmpxx.h>

#include <cstddef>
#include <string>
#include <vector>

#include "crystalforms/errors.hpp"

namespace crystalforms {

// All arithmetic in the library is exact. Rat is GMP's canonicalized
// rational; every function that produces a Rat keeps it canonical.
using Rat = mpq_class;
using RatVec = std::vector<Rat>;

inline Rat rat(long num, long den = 1) {
    if (den == 0) throw InputError("rational with zero denominator");
    Rat r(num, den);
    r.canonicalize();
    return r;
}

// Parses "p", "-p" or "p/q". This is the wire format for all numeric
// values in JSON inputs and outputs.
Rat rat_from_string(const std::string& s);

std::string rat_to_string(const Rat& r);

std::size_t rat_hash(const Rat& r);

std::size_t hash_combine(std::size_t seed, std::size_t v);

}  // namespace crystalforms
