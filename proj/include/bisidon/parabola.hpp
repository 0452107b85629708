#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <vector>

#include "fp.hpp"
#include "rational.hpp"
#include "rng.hpp"

namespace bisidon {

// Affine image of the standard parabola P0 = {(t, t^2)}: a p-point additive
// Sidon subset of F_p^2 with no three points collinear. Identity of a
// parabola is its point set; `generator` is one affine witness.
struct Parabola {
    uint64_t p = 0;
    AffineMap generator;
    std::vector<uint64_t> encoded; // sorted encode_point values

    bool contains(const FpPoint& v) const {
        return std::binary_search(encoded.begin(), encoded.end(),
                                  encode_point(v));
    }

    std::vector<FpPoint> points() const {
        std::vector<FpPoint> out;
        out.reserve(encoded.size());
        for (uint64_t e : encoded) out.push_back({e / p, e % p, p});
        return out;
    }

    friend bool operator==(const Parabola& a, const Parabola& b) {
        return a.p == b.p && a.encoded == b.encoded;
    }
};

inline Parabola make_parabola(const AffineMap& g) {
    Parabola out;
    out.p = g.p;
    out.generator = g;
    out.encoded.reserve(g.p);
    for (uint64_t t = 0; t < g.p; ++t) {
        FpPoint v = affine_apply(g, {t, mulm(t, t, g.p), g.p});
        out.encoded.push_back(encode_point(v));
    }
    std::sort(out.encoded.begin(), out.encoded.end());
    return out;
}

inline Parabola standard_parabola(uint64_t p) {
    AffineMap id;
    id.p = p;
    return make_parabola(id);
}

// Uniform over all p^2 (p^2 - 1) distinct parabolas: affine maps are sampled
// uniformly and every parabola has the same stabilizer order p(p-1).
inline Parabola random_parabola(uint64_t p, Rng& rng) {
    if (p < 3)
        throw precondition_error(
            "random_parabola: p must be >= 3 (two-point sets are degenerate)");
    return make_parabola(sample_uniform_affine(p, rng));
}

inline uint64_t parabola_count(uint64_t p) { return p * p * (p * p - 1); }

// The family P_s = {(x, y) : (x + s y)^2 = x + s^2 y}, s in F_p \ {0, 1}:
// the exactly p-2 parabolas through (0,0), (1,0), (0,1).
inline std::vector<Parabola> parabolas_through_unit_triple(uint64_t p) {
    if (p < 3) throw precondition_error("parabolas_through_unit_triple: p >= 3");
    std::vector<Parabola> out;
    for (uint64_t s = 2; s < p; ++s) {
        // parameterize by u = x + s y: y = (u^2 - u) / (s(s-1)), x = u - s y,
        // which is the affine image of (u, u^2) under
        // [[1 + s w, -s w], [-w, w]] with w = (s(s-1))^-1.
        const uint64_t w = invm(mulm(s, s - 1, p), p);
        AffineMap g;
        g.p = p;
        const uint64_t sw = mulm(s, w, p);
        g.m = {addm(1, sw, p), subm(0, sw, p), subm(0, w, p), w};
        out.push_back(make_parabola(g));
    }
    return out;
}

// Exact Pr[{v1, v2, v3} ⊂ P] for a noncollinear triple:
// (p - 2) / (p^2 (p + 1)(p - 1)).
inline Rat triple_containment_probability_exact(uint64_t p) {
    if (p < 3)
        throw precondition_error("triple_containment_probability_exact: p >= 3");
    Int pp(static_cast<unsigned long>(p));
    return make_rat(pp - 2, pp * pp * (pp + 1) * (pp - 1));
}

struct ContainmentEstimate {
    Rat estimate;
    Rat stderr_value;
    uint64_t hits = 0;
    uint64_t trials = 0;
};

// Monte-Carlo hit fraction over uniform random parabolas. Trials are split
// into chunks of 2^16 with one substream per chunk; hit counts merge
// associatively, so the result is reproducible for a fixed seed no matter
// how chunks are scheduled.
inline ContainmentEstimate estimate_containment_probability(
    const std::vector<FpPoint>& points, uint64_t trials, const Rng& rng) {
    if (points.empty()) throw precondition_error("no points given");
    const uint64_t p = points[0].p;
    for (const auto& v : points)
        if (v.p != p) throw precondition_error("points have mixed moduli");
    for (size_t i = 0; i < points.size(); ++i)
        for (size_t j = i + 1; j < points.size(); ++j)
            if (points[i] == points[j])
                throw precondition_error("points must be distinct");

    constexpr uint64_t kChunk = 1ULL << 16;
    uint64_t hits = 0;
    const uint64_t chunks = (trials + kChunk - 1) / kChunk;
    for (uint64_t c = 0; c < chunks; ++c) {
        Rng sub = rng.substream(c);
        const uint64_t n = std::min(kChunk, trials - c * kChunk);
        for (uint64_t t = 0; t < n; ++t) {
            Parabola par = random_parabola(p, sub);
            bool all = true;
            for (const auto& v : points)
                if (!par.contains(v)) {
                    all = false;
                    break;
                }
            if (all) ++hits;
        }
    }
    ContainmentEstimate out;
    out.hits = hits;
    out.trials = trials;
    out.estimate = make_rat(Int(static_cast<unsigned long>(hits)),
                            Int(static_cast<unsigned long>(trials)));
    const double phat = static_cast<double>(hits) / static_cast<double>(trials);
    out.stderr_value =
        rat_from_double(std::sqrt(phat * (1.0 - phat) / (double)trials));
    return out;
}

// All distinct parabolas mod p with the number of affine maps generating
// each; exhaustive, for small p only.
inline std::map<std::vector<uint64_t>, uint64_t> enumerate_all_parabolas(
    uint64_t p) {
    if (p > 7)
        throw precondition_error(
            "enumerate_all_parabolas: exhaustive enumeration capped at p <= 7");
    std::map<std::vector<uint64_t>, uint64_t> out;
    AffineMap g;
    g.p = p;
    for (g.m[0] = 0; g.m[0] < p; ++g.m[0])
        for (g.m[1] = 0; g.m[1] < p; ++g.m[1])
            for (g.m[2] = 0; g.m[2] < p; ++g.m[2])
                for (g.m[3] = 0; g.m[3] < p; ++g.m[3]) {
                    if (g.det() == 0) continue;
                    for (g.tx = 0; g.tx < p; ++g.tx)
                        for (g.ty = 0; g.ty < p; ++g.ty)
                            ++out[make_parabola(g).encoded];
                }
    return out;
}

} // namespace bisidon
