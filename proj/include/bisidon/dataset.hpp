#pragma once

#include <cstdint>
#include <set>
#include <string>
#include <vector>

#include "rational.hpp"
#include "rng.hpp"

namespace bisidon {

enum class DatasetKind { interval, geometric, random, pds, file };

inline std::string dataset_kind_name(DatasetKind k) {
    switch (k) {
        case DatasetKind::interval: return "interval";
        case DatasetKind::geometric: return "geometric";
        case DatasetKind::random: return "random";
        case DatasetKind::pds: return "pds";
        case DatasetKind::file: return "file";
    }
    return "?";
}

struct Dataset {
    DatasetKind kind = DatasetKind::interval;
    uint64_t n = 0;
    Rat gamma = Rat(0);
    Int bound = 0;
    uint64_t p = 0;
    uint64_t seed = 0;
    std::vector<Rat> elements;
};

// {1, ..., N}
inline Dataset gen_interval(uint64_t n) {
    if (n < 1) throw precondition_error("interval: N >= 1");
    Dataset d;
    d.kind = DatasetKind::interval;
    d.n = n;
    for (uint64_t i = 1; i <= n; ++i)
        d.elements.emplace_back(Int(static_cast<unsigned long>(i)));
    return d;
}

// {gamma, gamma^2, ..., gamma^N}, exact rationals
inline Dataset gen_geometric(const Rat& gamma, uint64_t n) {
    if (n < 1) throw precondition_error("geometric: N >= 1");
    if (gamma == -1 || gamma == 0 || gamma == 1)
        throw precondition_error("geometric: gamma must avoid {-1, 0, 1}");
    Dataset d;
    d.kind = DatasetKind::geometric;
    d.n = n;
    d.gamma = gamma;
    Rat v = gamma;
    for (uint64_t i = 1; i <= n; ++i, v *= gamma) d.elements.push_back(v);
    d.elements = as_sorted_set(std::move(d.elements));
    return d;
}

// N distinct uniform integers from [1, M]
inline Dataset gen_random(uint64_t n, const Int& bound, Rng rng) {
    if (n < 1) throw precondition_error("random: N >= 1");
    if (bound < Int(static_cast<unsigned long>(n)))
        throw precondition_error("random: bound M must be >= N");
    if (!bound.fits_ulong_p())
        throw precondition_error("random: bound too large");
    Dataset d;
    d.kind = DatasetKind::random;
    d.n = n;
    d.bound = bound;
    d.seed = rng.seed();
    const uint64_t m = mpz_get_ui(bound.get_mpz_t());
    std::set<uint64_t> picked;
    while (picked.size() < n) picked.insert(1 + rng.below(m));
    for (uint64_t v : picked)
        d.elements.emplace_back(Int(static_cast<unsigned long>(v)));
    return d;
}

// p+1 residues whose pairwise differences are all distinct mod p^2 + p + 1
// (a Singer-style perfect difference set), found by backtracking with the
// first element normalized to 1. Exists when p is a prime power.
inline Dataset gen_pds(uint64_t p) {
    if (p < 2 || p > 11) throw precondition_error("pds: p must be in [2, 11]");
    const uint64_t m = p * p + p + 1;
    const size_t k = p + 1;
    std::vector<uint64_t> chosen{1};
    std::vector<bool> used_diff(m, false);

    auto mark = [&](uint64_t a, uint64_t b, bool on) {
        const uint64_t d1 = (a + m - b) % m;
        used_diff[d1] = on;
        used_diff[m - d1] = on;
    };
    auto conflicts = [&](uint64_t cand) {
        std::set<uint64_t> fresh; // differences this candidate introduces
        for (uint64_t c : chosen) {
            const uint64_t d1 = (cand + m - c) % m;
            const uint64_t d2 = m - d1;
            if (used_diff[d1] || used_diff[d2]) return true;
            if (!fresh.insert(d1).second || !fresh.insert(d2).second)
                return true;
        }
        return false;
    };

    // depth-first over ascending candidates
    std::vector<uint64_t> stack{2}; // next candidate to try at each depth
    while (chosen.size() < k) {
        uint64_t& cand = stack.back();
        bool advanced = false;
        for (; cand < m; ++cand) {
            if (conflicts(cand)) continue;
            for (uint64_t c : chosen) mark(cand, c, true);
            chosen.push_back(cand);
            stack.push_back(cand + 1);
            advanced = true;
            break;
        }
        if (!advanced) {
            stack.pop_back();
            if (stack.empty())
                throw precondition_error(
                    "pds: no perfect difference set mod " + std::to_string(m) +
                    " (p must be a prime power)");
            const uint64_t last = chosen.back();
            chosen.pop_back();
            for (uint64_t c : chosen) mark(last, c, false);
            ++stack.back();
        }
    }

    Dataset d;
    d.kind = DatasetKind::pds;
    d.n = k;
    d.p = p;
    for (uint64_t v : chosen)
        d.elements.emplace_back(Int(static_cast<unsigned long>(v)));
    d.elements = as_sorted_set(std::move(d.elements));
    return d;
}

} // namespace bisidon
