#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <vector>

#include "rational.hpp"

namespace bisidon {

enum class Op { sum, product };

struct EnergyReport {
    uint64_t additive_energy = 0;
    uint64_t multiplicative_energy = 0;
    uint64_t set_size = 0;
};

// One canonical representative of a nontrivial energy relation
// b1∘b2 = b3∘b4 with {b1,b2} != {b3,b4}: b1<=b2, b3<=b4, (b1,b2) lex-before
// (b3,b4). E0 = all four distinct, E1 = exactly one side doubled.
struct Quadruple {
    std::array<Rat, 4> elements;
    Op operation = Op::sum;
    enum class Kind { E0, E1 } kind = Kind::E0;
};

namespace detail {

inline Rat apply_op(const Rat& a, const Rat& b, Op op) {
    return op == Op::sum ? Rat(a + b) : Rat(a * b);
}

inline void check_product_domain(const std::vector<Rat>& set, Op op) {
    if (op != Op::product) return;
    for (const auto& v : set)
        if (v == 0)
            throw precondition_error(
                "multiplicative operation: 0 must not be an element "
                "(0*a = 0*b for all a, b)");
}

// All elements as int64 with |v| < 2^30, so pairwise sums and products stay
// well inside the sortable 62-bit key range.
inline bool small_int_values(const std::vector<Rat>& set,
                             std::vector<long long>& out) {
    constexpr long long kBound = 1LL << 30;
    out.clear();
    out.reserve(set.size());
    for (const auto& v : set) {
        long long x;
        if (!fits_int64(v, x) || x >= kBound || x <= -kBound) return false;
        out.push_back(x);
    }
    return true;
}

// Grouped ordered-quadruple count: E = sum over values s of r(s)^2 where
// r(s) counts ordered pairs. Pairs are enumerated unordered (i <= j) with
// weight 2 off-diagonal, 1 on the diagonal.
inline uint64_t energy_int64(const std::vector<long long>& v, Op op) {
    const size_t n = v.size();
    if (op == Op::sum) {
        long long lo = v[0], hi = v[0];
        for (long long x : v) {
            lo = std::min(lo, x);
            hi = std::max(hi, x);
        }
        const unsigned long long range = 2 * (unsigned long long)(hi - lo);
        if (range <= (1ULL << 26)) {
            // table counting over the (shifted) sum range
            std::vector<uint32_t> r(range + 1, 0);
            for (size_t i = 0; i < n; ++i)
                for (size_t j = i; j < n; ++j)
                    r[(unsigned long long)(v[i] + v[j] - 2 * lo)] +=
                        (i == j) ? 1 : 2;
            uint64_t e = 0;
            for (uint64_t c : r) e += c * c;
            return e;
        }
    }
    // sorted grouping; key packs (value + 2^61) << 1 | diagonal-flag so that
    // groups of equal value are contiguous after one sort
    std::vector<uint64_t> keys;
    keys.reserve(n * (n + 1) / 2);
    constexpr uint64_t kOffset = 1ULL << 61;
    for (size_t i = 0; i < n; ++i)
        for (size_t j = i; j < n; ++j) {
            long long val = op == Op::sum ? v[i] + v[j] : v[i] * v[j];
            keys.push_back((((uint64_t)val + kOffset) << 1) | (i == j ? 1 : 0));
        }
    std::sort(keys.begin(), keys.end());
    uint64_t e = 0;
    size_t i = 0;
    while (i < keys.size()) {
        size_t j = i;
        uint64_t r = 0;
        while (j < keys.size() && (keys[j] >> 1) == (keys[i] >> 1)) {
            r += (keys[j] & 1) ? 1 : 2;
            ++j;
        }
        e += r * r;
        i = j;
    }
    return e;
}

inline uint64_t energy_generic(const std::vector<Rat>& set, Op op) {
    const size_t n = set.size();
    std::vector<std::pair<Rat, uint32_t>> vals;
    vals.reserve(n * (n + 1) / 2);
    for (size_t i = 0; i < n; ++i)
        for (size_t j = i; j < n; ++j)
            vals.emplace_back(apply_op(set[i], set[j], op), i == j ? 1 : 2);
    std::sort(vals.begin(), vals.end(),
              [](const auto& a, const auto& b) { return a.first < b.first; });
    uint64_t e = 0;
    size_t i = 0;
    while (i < vals.size()) {
        size_t j = i;
        uint64_t r = 0;
        while (j < vals.size() && vals[j].first == vals[i].first) {
            r += vals[j].second;
            ++j;
        }
        e += r * r;
        i = j;
    }
    return e;
}

} // namespace detail

// Ordered-quadruple energy of a finite set (duplicates rejected).
inline uint64_t energy(const std::vector<Rat>& elements, Op op) {
    const auto set = as_sorted_set(elements);
    detail::check_product_domain(set, op);
    if (set.empty()) return 0;
    std::vector<long long> ints;
    if (detail::small_int_values(set, ints)) return detail::energy_int64(ints, op);
    return detail::energy_generic(set, op);
}

inline uint64_t additive_energy(const std::vector<Rat>& set) {
    return energy(set, Op::sum);
}

inline uint64_t multiplicative_energy(const std::vector<Rat>& set) {
    return energy(set, Op::product);
}

// Minimum possible energy: the 2n^2 - n trivial quadruples.
inline uint64_t trivial_energy(uint64_t n) { return 2 * n * n - n; }

inline bool is_sidon(const std::vector<Rat>& set, Op op) {
    if (set.size() <= 1) return true;
    return energy(set, op) == trivial_energy(set.size());
}

inline bool is_additive_sidon(const std::vector<Rat>& set) {
    return is_sidon(set, Op::sum);
}

inline bool is_multiplicative_sidon(const std::vector<Rat>& set) {
    return is_sidon(set, Op::product);
}

inline bool is_bi_sidon(const std::vector<Rat>& set) {
    return is_additive_sidon(set) && is_multiplicative_sidon(set);
}

// One canonical representative per nontrivial relation, ordered by the
// common pair value then lexicographically; deterministic.
inline std::vector<Quadruple> nontrivial_quadruples(
    const std::vector<Rat>& elements, Op op) {
    const auto set = as_sorted_set(elements);
    detail::check_product_domain(set, op);
    std::map<Rat, std::vector<std::pair<size_t, size_t>>> groups;
    for (size_t i = 0; i < set.size(); ++i)
        for (size_t j = i; j < set.size(); ++j)
            groups[detail::apply_op(set[i], set[j], op)].emplace_back(i, j);
    std::vector<Quadruple> out;
    for (const auto& [value, pairs] : groups) {
        for (size_t u = 0; u < pairs.size(); ++u)
            for (size_t v = u + 1; v < pairs.size(); ++v) {
                // set is sorted, so pairs are already lex-ordered by (i, j)
                const auto& [a1, a2] = pairs[u];
                const auto& [b1, b2] = pairs[v];
                Quadruple q;
                q.elements = {set[a1], set[a2], set[b1], set[b2]};
                q.operation = op;
                const bool left_doubled = a1 == a2;
                const bool right_doubled = b1 == b2;
                // E1 means exactly one doubled side; for sums (and for
                // products of same-sign sets) both sides doubled cannot
                // happen with distinct multisets.
                q.kind = (left_doubled != right_doubled)
                             ? Quadruple::Kind::E1
                             : Quadruple::Kind::E0;
                out.push_back(std::move(q));
            }
    }
    return out;
}

} // namespace bisidon
