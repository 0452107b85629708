#pragma once

#include <cstdint>
#include <map>
#include <unordered_map>
#include <vector>

#include "factor.hpp"
#include "rational.hpp"
#include "rng.hpp"

namespace bisidon {

// -------------------------------------------------------------------------
// Multiplicative rationals -> integers, via exponent vectors in radix R.
//
// Elements are written as products of primes; the exponent vectors live in
// Z^d and f evaluates them with weights R^(i-1). R = 2M + 1 where M bounds
// the absolute entries of all pairwise exponent-vector sums, so sums of two
// images decode uniquely (signed digits in [-M, M]) and
//   a*b = a'*b'  <=>  f(a)+f(b) = f(a')+f(b').
// -------------------------------------------------------------------------
struct RadixEmbedding {
    std::vector<Int> prime_order; // ascending, the coordinates used
    Int radix;
    std::vector<Rat> domain; // sorted ascending
    std::vector<Int> images; // aligned with domain

    const Int& image_of(const Rat& a) const {
        auto it = std::lower_bound(domain.begin(), domain.end(), a);
        if (it == domain.end() || *it != a)
            throw precondition_error("radix embedding: element not in domain");
        return images[it - domain.begin()];
    }
};

inline RadixEmbedding multiplicative_to_additive_embedding(
    const std::vector<Rat>& elements) {
    RadixEmbedding emb;
    emb.domain = as_sorted_set(elements);
    std::vector<ExponentVector> vectors;
    vectors.reserve(emb.domain.size());
    long long max_abs = 0;
    std::map<Int, size_t> prime_index;
    for (const auto& a : emb.domain) {
        if (a <= 0)
            throw precondition_error("radix embedding: elements must be positive");
        vectors.push_back(factorize(a));
        for (const auto& [p, e] : vectors.back()) {
            prime_index.emplace(p, 0);
            max_abs = std::max(max_abs, e < 0 ? -e : e);
        }
    }
    size_t idx = 0;
    for (auto& [p, i] : prime_index) {
        i = idx++;
        emb.prime_order.push_back(p);
    }
    // max pairwise-sum entry is 2 * max_abs (doubling an extreme element)
    const long m = static_cast<long>(2 * max_abs);
    emb.radix = std::max(Int(2 * m + 1), Int(2));
    std::vector<Int> weights(emb.prime_order.size());
    Int w = 1;
    for (size_t i = 0; i < weights.size(); ++i) {
        weights[i] = w;
        w *= emb.radix;
    }
    for (const auto& ev : vectors) {
        Int f = 0;
        for (const auto& [p, e] : ev)
            f += weights[prime_index[p]] * static_cast<long>(e);
        emb.images.push_back(f);
    }
    return emb;
}

// -------------------------------------------------------------------------
// Integers -> F_p^d via phi_p(x) = [p x] mod p with random rational
// multipliers theta_i = k_i / 2^63, evaluated exactly in integer arithmetic.
// -------------------------------------------------------------------------

// floor(p x) mod p for an exact rational x.
inline uint64_t phi_p(uint64_t p, const Rat& x) {
    Int num = x.get_num() * p;
    Int q;
    mpz_fdiv_q(q.get_mpz_t(), num.get_mpz_t(), x.get_den().get_mpz_t());
    Int r;
    mpz_fdiv_r_ui(r.get_mpz_t(), q.get_mpz_t(), p);
    return mpz_get_ui(r.get_mpz_t());
}

// Whether the fractional part of p x lies in [0, 1/2); exact comparison.
inline bool frac_in_lower_half(uint64_t p, const Rat& x) {
    Int num = x.get_num() * p;
    Int rem;
    mpz_fdiv_r(rem.get_mpz_t(), num.get_mpz_t(), x.get_den().get_mpz_t());
    return 2 * rem < x.get_den();
}

struct ModularEmbedding {
    uint64_t p = 0;
    unsigned d = 0;
    std::vector<uint64_t> theta_numerators; // theta_i = k_i / 2^63
    std::vector<Int> domain;                // input A, sorted
    std::vector<Int> retained;              // A', sorted
    std::vector<std::vector<uint64_t>> images; // aligned with retained

    Rat theta(unsigned i) const {
        return make_rat(Int(static_cast<unsigned long>(theta_numerators[i])),
                        Int(1) << 63);
    }
};

struct EmbeddingResult {
    ModularEmbedding embedding;
    Rat retained_fraction; // |A'| / |A|, exact
};

namespace detail {

inline void check_prop2_precondition(size_t n, uint64_t p, unsigned d) {
    // N <= 2^{-2d-1} p^d
    Int cap;
    mpz_ui_pow_ui(cap.get_mpz_t(), p, d);
    if (Int(static_cast<unsigned long>(n)) * (Int(1) << (2 * d + 1)) > cap)
        throw precondition_error(
            "modular embedding: |A| exceeds 2^(-2d-1) p^d; enlarge p");
}

} // namespace detail

inline EmbeddingResult sample_modular_embedding(const std::vector<Int>& set,
                                                uint64_t p, unsigned d,
                                                Rng rng) {
    if (d < 1) throw precondition_error("modular embedding: d must be >= 1");
    detail::check_prop2_precondition(set.size(), p, d);
    ModularEmbedding emb;
    emb.p = p;
    emb.d = d;
    emb.domain = set;
    std::sort(emb.domain.begin(), emb.domain.end());
    if (!emb.domain.empty() && emb.domain.front() < 1)
        throw precondition_error("modular embedding: elements must be positive");

    std::vector<Int> pk(d); // p * k_i, reused across elements
    for (unsigned i = 0; i < d; ++i) {
        uint64_t k = rng.below(1ULL << 63);
        emb.theta_numerators.push_back(k);
        pk[i] = Int(static_cast<unsigned long>(k)) * p;
    }

    // B: all d fractional parts of p theta_i a fall in [0, 1/2).
    // With m = p k_i a, the fractional part of m / 2^63 is below 1/2 exactly
    // when bit 62 of m is clear.
    std::vector<size_t> eligible;
    std::vector<std::vector<uint64_t>> coords;
    Int m, q, r;
    for (size_t idx = 0; idx < emb.domain.size(); ++idx) {
        std::vector<uint64_t> img(d);
        bool ok = true;
        for (unsigned i = 0; i < d && ok; ++i) {
            m = pk[i] * emb.domain[idx];
            if (mpz_tstbit(m.get_mpz_t(), 62)) {
                ok = false;
                break;
            }
            mpz_fdiv_q_2exp(q.get_mpz_t(), m.get_mpz_t(), 63);
            img[i] = mpz_fdiv_ui(q.get_mpz_t(), p);
        }
        if (ok) {
            eligible.push_back(idx);
            coords.push_back(std::move(img));
        }
    }

    // C: drop every element whose image collides with another's.
    std::map<std::vector<uint64_t>, unsigned> occupancy;
    for (const auto& img : coords) ++occupancy[img];
    for (size_t i = 0; i < eligible.size(); ++i) {
        if (occupancy[coords[i]] == 1) {
            emb.retained.push_back(emb.domain[eligible[i]]);
            emb.images.push_back(coords[i]);
        }
    }

    Rat fraction = emb.domain.empty()
                       ? Rat(1)
                       : make_rat(Int(static_cast<unsigned long>(emb.retained.size())),
                                  Int(static_cast<unsigned long>(emb.domain.size())));
    return {std::move(emb), fraction};
}

// True iff the image table is injective on A' and every ordered pair of A'
// with a fixed sum has the same image sum.
inline bool verify_freiman_homomorphism(const ModularEmbedding& emb) {
    const size_t n = emb.retained.size();
    if (n <= 1) return true;
    // injectivity
    {
        auto sorted = emb.images;
        std::sort(sorted.begin(), sorted.end());
        if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end())
            return false;
    }
    const uint64_t p = emb.p;
    // coordinate sums stay below 2p, so 16-bit lanes need p < 2^15
    const bool packable = emb.d <= 4 && p < (1ULL << 15);
    auto packed_image_sum = [&](size_t i, size_t j) {
        uint64_t key = 0;
        for (unsigned c = 0; c < emb.d; ++c) {
            uint64_t s = emb.images[i][c] + emb.images[j][c];
            if (s >= p) s -= p;
            key = (key << 16) | s;
        }
        return key;
    };

    // fast path: int64 domain with a small value range -> dense sum table
    bool small = packable;
    long long lo = 0, hi = 0;
    if (small) {
        for (size_t i = 0; i < n; ++i) {
            if (!emb.retained[i].fits_slong_p()) {
                small = false;
                break;
            }
            long long v = emb.retained[i].get_si();
            if (i == 0) lo = hi = v;
            lo = std::min(lo, v);
            hi = std::max(hi, v);
        }
    }
    if (small && 2 * (unsigned long long)(hi - lo) <= (1ULL << 26)) {
        constexpr uint64_t kUnset = ~uint64_t{0};
        std::vector<uint64_t> table(2 * (size_t)(hi - lo) + 1, kUnset);
        for (size_t i = 0; i < n; ++i) {
            const long long vi = emb.retained[i].get_si();
            for (size_t j = i; j < n; ++j) {
                const size_t slot =
                    (size_t)(vi + emb.retained[j].get_si() - 2 * lo);
                const uint64_t img = packed_image_sum(i, j);
                if (table[slot] == kUnset)
                    table[slot] = img;
                else if (table[slot] != img)
                    return false;
            }
        }
        return true;
    }

    // generic path: group by exact sum
    std::map<Int, std::vector<uint64_t>> seen;
    for (size_t i = 0; i < n; ++i)
        for (size_t j = i; j < n; ++j) {
            Int s = emb.retained[i] + emb.retained[j];
            std::vector<uint64_t> img(emb.d);
            for (unsigned c = 0; c < emb.d; ++c) {
                uint64_t v = emb.images[i][c] + emb.images[j][c];
                if (v >= p) v -= p;
                img[c] = v;
            }
            auto [it, inserted] = seen.emplace(std::move(s), img);
            if (!inserted && it->second != img) return false;
        }
    return true;
}

// k independent samples; keeps the one retaining the most elements
// (ties: lowest substream index).
inline EmbeddingResult best_of_k_embeddings(const std::vector<Int>& set,
                                            uint64_t p, unsigned d, unsigned k,
                                            const Rng& rng) {
    if (k < 1) throw precondition_error("best_of_k_embeddings: k must be >= 1");
    EmbeddingResult best;
    bool have = false;
    for (unsigned i = 0; i < k; ++i) {
        auto sample = sample_modular_embedding(set, p, d, rng.substream(i));
        if (!have || sample.embedding.retained.size() >
                         best.embedding.retained.size()) {
            best = std::move(sample);
            have = true;
        }
    }
    return best;
}

} // namespace bisidon
