#pragma once

// Arbitrary-precision integer helpers shared by every module.

#include <boost/multiprecision/cpp_int.hpp>

#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace okgraph {

using Integer = boost::multiprecision::cpp_int;
using IntVector = std::vector<Integer>;

inline Integer abs_value(const Integer& x) { return x < 0 ? Integer(-x) : x; }

inline Integer gcd(Integer a, Integer b) {
    a = abs_value(a);
    b = abs_value(b);
    while (b != 0) {
        Integer r = a % b;
        a = std::move(b);
        b = std::move(r);
    }
    return a;
}

/// Quotient rounded toward negative infinity. `b` must be nonzero.
inline Integer floor_div(const Integer& a, const Integer& b) {
    Integer q = a / b;
    Integer r = a - q * b;
    if (r != 0 && ((r < 0) != (b < 0))) --q;
    return q;
}

/// Representative of `a` modulo `b` in [0, |b|).
inline Integer floor_mod(const Integer& a, const Integer& b) {
    Integer r = a % b;
    if (r < 0) r += abs_value(b);
    return r;
}

/// Exponent of the prime `q` in |x|. Zero for x = 0 is never requested.
inline unsigned valuation(Integer x, const Integer& q) {
    x = abs_value(x);
    unsigned v = 0;
    while (x != 0 && x % q == 0) {
        x /= q;
        ++v;
    }
    return v;
}

/// Prime divisors of |x| in increasing order (trial division).
inline std::vector<Integer> prime_divisors(Integer x) {
    std::vector<Integer> out;
    x = abs_value(x);
    if (x < 2) return out;
    if (x % 2 == 0) {
        out.emplace_back(2);
        while (x % 2 == 0) x /= 2;
    }
    for (Integer d = 3; d * d <= x; d += 2) {
        if (x % d == 0) {
            out.push_back(d);
            while (x % d == 0) x /= d;
        }
    }
    if (x > 1) out.push_back(x);
    return out;
}

inline std::string to_string(const Integer& x) { return x.str(); }

inline Integer parse_integer(std::string_view text) {
    std::size_t i = 0;
    bool neg = false;
    if (i < text.size() && (text[i] == '-' || text[i] == '+')) {
        neg = text[i] == '-';
        ++i;
    }
    if (i == text.size()) throw std::invalid_argument("not an integer: '" + std::string(text) + "'");
    Integer value = 0;
    for (; i < text.size(); ++i) {
        char c = text[i];
        if (c < '0' || c > '9') throw std::invalid_argument("not an integer: '" + std::string(text) + "'");
        value = value * 10 + (c - '0');
    }
    return neg ? Integer(-value) : value;
}

/// True when |x| <= 2^53, i.e. representable exactly as a JSON number.
inline bool fits_json_number(const Integer& x) {
    static const Integer limit = Integer(1) << 53;
    return abs_value(x) <= limit;
}

inline std::int64_t to_int64(const Integer& x) {
    if (x > Integer(INT64_MAX) || x < Integer(INT64_MIN))
        throw std::overflow_error("integer does not fit in 64 bits: " + x.str());
    return x.convert_to<std::int64_t>();
}

}  // namespace okgraph
