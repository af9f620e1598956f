#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <cstdint>
#include <numeric>
#include <stdexcept>
#include <string>
#include <vector>

namespace tordeg {

using Int = boost::multiprecision::cpp_int;
using Rat = boost::multiprecision::cpp_rational;

inline double to_double(const Rat& q) { return q.convert_to<double>(); }
inline double to_double(const Int& n) { return n.convert_to<double>(); }

inline Int rat_num(const Rat& q) { return boost::multiprecision::numerator(q); }
inline Int rat_den(const Rat& q) { return boost::multiprecision::denominator(q); }

inline Int int_gcd(Int a, Int b) { return boost::multiprecision::gcd(a, b); }
inline Int int_lcm(Int a, Int b) { return boost::multiprecision::lcm(a, b); }

/// Parse "p/q" or "p" (exact, no float round-trip).
inline Rat parse_rational(const std::string& s) {
    auto slash = s.find('/');
    try {
        if (slash == std::string::npos) return Rat(Int(s));
        Int num(s.substr(0, slash));
        Int den(s.substr(slash + 1));
        if (den == 0) throw std::invalid_argument("zero denominator");
        return Rat(num, den);
    } catch (const std::exception&) {
        throw std::invalid_argument("not a rational: '" + s + "'");
    }
}

inline std::string format_rational(const Rat& q) {
    Int n = rat_num(q), d = rat_den(q);
    if (d == 1) return n.str();
    return n.str() + "/" + d.str();
}

inline bool is_integer(const Rat& q) { return rat_den(q) == 1; }

/// lcm of denominators; 1 for an all-integer vector.
inline Int denominator_lcm(const std::vector<Rat>& v) {
    Int l = 1;
    for (const auto& q : v) l = int_lcm(l, rat_den(q));
    return l;
}

} // namespace tordeg
