#pragma once

#include <cstdint>
#include <stdexcept>

namespace bisidon {

namespace detail {

inline uint64_t mulmod_u64(uint64_t a, uint64_t b, uint64_t m) {
    return static_cast<uint64_t>((static_cast<__uint128_t>(a) * b) % m);
}

inline uint64_t powmod_u64(uint64_t base, uint64_t exp, uint64_t m) {
    uint64_t result = 1;
    base %= m;
    while (exp > 0) {
        if (exp & 1) result = mulmod_u64(result, base, m);
        base = mulmod_u64(base, base, m);
        exp >>= 1;
    }
    return result;
}

inline bool miller_rabin_witness(uint64_t n, uint64_t a, uint64_t d, int r) {
    uint64_t x = powmod_u64(a % n, d, n);
    if (x == 1 || x == n - 1) return true;
    for (int i = 1; i < r; ++i) {
        x = mulmod_u64(x, x, n);
        if (x == n - 1) return true;
    }
    return false;
}

} // namespace detail

// Deterministic Miller-Rabin: the witness set below is proven sufficient for
// all n < 2^64 (Sinclair bases).
inline bool is_prime_u64(uint64_t n) {
    if (n < 2) return false;
    for (uint64_t p : {2ULL, 3ULL, 5ULL, 7ULL, 11ULL, 13ULL, 17ULL, 19ULL,
                       23ULL, 29ULL, 31ULL, 37ULL}) {
        if (n == p) return true;
        if (n % p == 0) return false;
    }
    uint64_t d = n - 1;
    int r = 0;
    while ((d & 1) == 0) {
        d >>= 1;
        ++r;
    }
    for (uint64_t a : {2ULL, 325ULL, 9375ULL, 28178ULL, 450775ULL,
                       9780504ULL, 1795265022ULL}) {
        if (a % n == 0) continue;
        if (!detail::miller_rabin_witness(n, a, d, r)) return false;
    }
    return true;
}

inline uint64_t next_prime_at_least(uint64_t n) {
    if (n < 1) throw std::invalid_argument("next_prime_at_least: n must be >= 1");
    if (n <= 2) return 2;
    if ((n & 1) == 0) ++n;
    while (!is_prime_u64(n)) n += 2;
    return n;
}

} // namespace bisidon
