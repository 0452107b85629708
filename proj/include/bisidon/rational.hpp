#pragma once

#include <gmpxx.h>

#include <algorithm>
#include <stdexcept>
#include <string>
#include <vector>

namespace bisidon {

using Int = mpz_class;
using Rat = mpq_class; // always kept in lowest terms, denominator > 0

struct input_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct precondition_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

inline Rat make_rat(const Int& num, const Int& den) {
    if (den == 0) throw input_error("zero denominator");
    Rat r(num, den);
    r.canonicalize();
    return r;
}

inline Rat make_rat(long num, long den = 1) {
    return make_rat(Int(num), Int(den));
}

// Accepts a decimal integer or "a/b". Decimal points are rejected: inputs
// must be rationals written exactly (the multiplicative pipeline needs to
// factorize them).
inline Rat parse_rational(const std::string& text) {
    if (text.empty()) throw input_error("empty value");
    if (text.find('.') != std::string::npos)
        throw input_error("'" + text + "': decimal notation not accepted; "
                          "write the value as an exact fraction a/b "
                          "(inputs are restricted to rationals)");
    const auto slash = text.find('/');
    try {
        // explicit base 10: the default-base constructor would read a
        // leading 0 as octal and 0x as hex
        if (slash == std::string::npos) {
            return make_rat(Int(text, 10), Int(1));
        }
        Int num(text.substr(0, slash), 10);
        Int den(text.substr(slash + 1), 10);
        return make_rat(num, den);
    } catch (const std::invalid_argument&) {
        throw input_error("'" + text + "': not a valid rational");
    }
}

inline std::string rat_to_string(const Rat& r) {
    if (r.get_den() == 1) return r.get_num().get_str();
    return r.get_num().get_str() + "/" + r.get_den().get_str();
}

inline bool is_integer(const Rat& r) { return r.get_den() == 1; }

// True when the value is an integer that fits a signed 64-bit word; used to
// select fast counting kernels.
inline bool fits_int64(const Rat& r, long long& out) {
    if (!is_integer(r)) return false;
    if (!r.get_num().fits_slong_p()) return false;
    out = r.get_num().get_si();
    return true;
}

inline Rat rat_from_double(double x) {
    Rat r;
    mpq_set_d(r.get_mpq_t(), x); // exact: doubles are dyadic rationals
    return r;
}

// Validates distinctness and returns the elements sorted ascending.
inline std::vector<Rat> as_sorted_set(std::vector<Rat> v) {
    std::sort(v.begin(), v.end());
    for (size_t i = 1; i < v.size(); ++i)
        if (v[i] == v[i - 1])
            throw input_error("duplicate element: " + rat_to_string(v[i]));
    return v;
}

} // namespace bisidon
