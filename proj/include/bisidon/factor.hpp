#pragma once

#include <cstdint>
#include <map>
#include <numeric>

#include "primes.hpp"
#include "rational.hpp"
#include "rng.hpp"

namespace bisidon {

// Sparse prime factorization; negative exponents encode the denominator.
// Invariant: keys prime, no zero exponents.
using ExponentVector = std::map<Int, long long>;

namespace detail {

inline uint64_t pollard_rho_u64(uint64_t n, Rng& rng) {
    // Brent's cycle variant on f(x) = x^2 + c mod n.
    while (true) {
        uint64_t c = 1 + rng.below(n - 1);
        uint64_t x = rng.below(n);
        uint64_t y = x;
        uint64_t d = 1;
        uint64_t saved = 1;
        int count = 0;
        while (d == 1) {
            x = (mulmod_u64(x, x, n) + c) % n;
            y = (mulmod_u64(y, y, n) + c) % n;
            y = (mulmod_u64(y, y, n) + c) % n;
            uint64_t diff = x > y ? x - y : y - x;
            if (diff == 0) break;
            saved = mulmod_u64(saved, diff, n);
            if (++count % 64 == 0) {
                d = std::gcd(saved, n);
                saved = 1;
            }
        }
        if (d == 1 && saved != 1) d = std::gcd(saved, n);
        if (d != 1 && d != n) return d;
    }
}

inline void factor_u64_into(uint64_t n, ExponentVector& out, long long sign,
                            Rng& rng) {
    if (n == 1) return;
    if (is_prime_u64(n)) {
        out[Int(static_cast<unsigned long>(n))] += sign;
        return;
    }
    uint64_t d = pollard_rho_u64(n, rng);
    factor_u64_into(d, out, sign, rng);
    factor_u64_into(n / d, out, sign, rng);
}

// Trial division by 2 and odd numbers up to `bound`.
inline void trial_divide(Int& n, uint64_t bound, ExponentVector& out,
                         long long sign) {
    auto divide_out = [&](uint64_t p) {
        long long e = 0;
        while (mpz_divisible_ui_p(n.get_mpz_t(), p)) {
            mpz_divexact_ui(n.get_mpz_t(), n.get_mpz_t(), p);
            ++e;
        }
        if (e != 0) out[Int(static_cast<unsigned long>(p))] += sign * e;
    };
    divide_out(2);
    divide_out(3);
    for (uint64_t p = 5; p <= bound && Int(p) * Int(p) <= n; p += 6) {
        divide_out(p);
        divide_out(p + 2);
    }
}

inline void factor_positive_into(Int n, ExponentVector& out, long long sign) {
    constexpr uint64_t kTrialBound = 1'000'000;
    trial_divide(n, kTrialBound, out, sign);
    if (n == 1) return;
    if (n.fits_ulong_p()) {
        Rng rng(0x9d1c03a7f00dULL + mpz_get_ui(n.get_mpz_t()));
        factor_u64_into(mpz_get_ui(n.get_mpz_t()), out, sign, rng);
        return;
    }
    // Cofactor beyond 64 bits and free of factors <= 10^6: BPSW says prime
    // with overwhelming confidence, otherwise it is out of desk scale.
    if (mpz_probab_prime_p(n.get_mpz_t(), 40) > 0) {
        out[n] += sign;
        return;
    }
    throw precondition_error("factorize: cofactor " + n.get_str() +
                             " resists factorization at desk scale");
}

} // namespace detail

// Exact factorization of a positive rational into prime powers.
inline ExponentVector factorize(const Rat& r) {
    if (r <= 0) throw precondition_error("factorize: value must be positive");
    ExponentVector out;
    detail::factor_positive_into(r.get_num(), out, +1);
    detail::factor_positive_into(r.get_den(), out, -1);
    for (auto it = out.begin(); it != out.end();) {
        it = it->second == 0 ? out.erase(it) : std::next(it);
    }
    return out;
}

inline Rat evaluate_exponent_vector(const ExponentVector& ev) {
    Int num = 1, den = 1;
    for (const auto& [p, e] : ev) {
        Int pw;
        mpz_pow_ui(pw.get_mpz_t(), p.get_mpz_t(),
                   static_cast<unsigned long>(e < 0 ? -e : e));
        (e > 0 ? num : den) *= pw;
    }
    return make_rat(num, den);
}

} // namespace bisidon
