#include "crystalforms/rational.hpp"

#include <cctype>

namespace crystalforms {

Rat rat_from_string(const std::string& s) {
    if (s.empty()) throw InputError("empty rational literal");
    std::size_t slash = s.find('/');
    std::string num = slash == std::string::npos ? s : s.substr(0, slash);
    std::string den = slash == std::string::npos ? "1" : s.substr(slash + 1);
    auto valid = [](const std::string& part, bool sign_ok) {
        if (part.empty()) return false;
        std::size_t i = 0;
        if (sign_ok && (part[0] == '-' || part[0] == '+')) i = 1;
        if (i == part.size()) return false;
        for (; i < part.size(); ++i)
            if (!std::isdigit(static_cast<unsigned char>(part[i]))) return false;
        return true;
    };
    if (!valid(num, true) || !valid(den, false))
        throw InputError("malformed rational literal: '" + s + "'");
    Rat r;
    if (r.set_str(num + "/" + den, 10) != 0)
        throw InputError("malformed rational literal: '" + s + "'");
    if (r.get_den() == 0) throw InputError("rational with zero denominator: '" + s + "'");
    r.canonicalize();
    return r;
}

std::string rat_to_string(const Rat& r) {
    if (r.get_den() == 1) return r.get_num().get_str();
    return r.get_num().get_str() + "/" + r.get_den().get_str();
}

std::size_t hash_combine(std::size_t seed, std::size_t v) {
    return seed ^ (v + 0x9e3779b97f4a7c15ULL + (seed << 6) + (seed >> 2));
}

std::size_t rat_hash(const Rat& r) {
    std::size_t h = 1469598103934665603ULL;
    h = hash_combine(h, mpz_get_si(r.get_num().get_mpz_t()));
    h = hash_combine(h, mpz_get_si(r.get_den().get_mpz_t()));
    return h;
}

}  // namespace crystalforms
