#pragma once

#include <array>
#include <cstdint>
#include <stdexcept>

#include "primes.hpp"
#include "rng.hpp"

namespace bisidon {

// Arithmetic in F_p for p < 2^32; products are exact in 64 bits.
inline uint64_t addm(uint64_t a, uint64_t b, uint64_t p) {
    uint64_t s = a + b;
    return s >= p ? s - p : s;
}
inline uint64_t subm(uint64_t a, uint64_t b, uint64_t p) {
    return a >= b ? a - b : a + p - b;
}
inline uint64_t mulm(uint64_t a, uint64_t b, uint64_t p) { return (a * b) % p; }

inline uint64_t invm(uint64_t a, uint64_t p) {
    // Fermat; p prime.
    if (a == 0) throw std::domain_error("invm: zero is not invertible");
    return detail::powmod_u64(a, p - 2, p);
}

struct FpPoint {
    uint64_t x = 0;
    uint64_t y = 0;
    uint64_t p = 0;

    friend bool operator==(const FpPoint&, const FpPoint&) = default;
    friend auto operator<=>(const FpPoint&, const FpPoint&) = default;
};

// Dense encoding x*p + y; used as a set key.
inline uint64_t encode_point(const FpPoint& v) { return v.x * v.p + v.y; }

inline bool collinear(const FpPoint& a, const FpPoint& b, const FpPoint& c) {
    const uint64_t p = a.p;
    uint64_t ux = subm(b.x, a.x, p), uy = subm(b.y, a.y, p);
    uint64_t vx = subm(c.x, a.x, p), vy = subm(c.y, a.y, p);
    return subm(mulm(ux, vy, p), mulm(uy, vx, p), p) == 0;
}

// Invertible affine transformation v -> Mv + t of F_p^2.
struct AffineMap {
    std::array<uint64_t, 4> m{1, 0, 0, 1}; // row-major [[a,b],[c,d]]
    uint64_t tx = 0;
    uint64_t ty = 0;
    uint64_t p = 0;

    uint64_t det() const {
        return subm(mulm(m[0], m[3], p), mulm(m[1], m[2], p), p);
    }

    friend bool operator==(const AffineMap&, const AffineMap&) = default;
};

inline FpPoint affine_apply(const AffineMap& g, const FpPoint& v) {
    if (g.p != v.p) throw std::invalid_argument("affine_apply: modulus mismatch");
    const uint64_t p = g.p;
    return {addm(addm(mulm(g.m[0], v.x, p), mulm(g.m[1], v.y, p), p), g.tx, p),
            addm(addm(mulm(g.m[2], v.x, p), mulm(g.m[3], v.y, p), p), g.ty, p),
            p};
}

inline AffineMap affine_invert(const AffineMap& g) {
    const uint64_t p = g.p;
    const uint64_t dinv = invm(g.det(), p);
    AffineMap h;
    h.p = p;
    h.m = {mulm(g.m[3], dinv, p), mulm(p - g.m[1] % p, dinv, p) % p,
           mulm(p - g.m[2] % p, dinv, p) % p, mulm(g.m[0], dinv, p)};
    // h(v) = M^{-1}(v - t)
    h.tx = subm(0, addm(mulm(h.m[0], g.tx, p), mulm(h.m[1], g.ty, p), p), p);
    h.ty = subm(0, addm(mulm(h.m[2], g.tx, p), mulm(h.m[3], g.ty, p), p), p);
    return h;
}

inline AffineMap affine_compose(const AffineMap& g, const AffineMap& h) {
    // (g ∘ h)(v) = g(h(v))
    if (g.p != h.p) throw std::invalid_argument("affine_compose: modulus mismatch");
    const uint64_t p = g.p;
    AffineMap r;
    r.p = p;
    r.m = {addm(mulm(g.m[0], h.m[0], p), mulm(g.m[1], h.m[2], p), p),
           addm(mulm(g.m[0], h.m[1], p), mulm(g.m[1], h.m[3], p), p),
           addm(mulm(g.m[2], h.m[0], p), mulm(g.m[3], h.m[2], p), p),
           addm(mulm(g.m[2], h.m[1], p), mulm(g.m[3], h.m[3], p), p)};
    FpPoint t = affine_apply(g, {h.tx, h.ty, p});
    r.tx = t.x;
    r.ty = t.y;
    return r;
}

// Exactly uniform over all p^2 (p^2-1)(p^2-p) invertible affine maps:
// unbiased residue draws for every entry, rejection on a zero determinant.
inline AffineMap sample_uniform_affine(uint64_t p, Rng& rng) {
    AffineMap g;
    g.p = p;
    do {
        for (auto& e : g.m) e = rng.below(p);
    } while (g.det() == 0);
    g.tx = rng.below(p);
    g.ty = rng.below(p);
    return g;
}

} // namespace bisidon
