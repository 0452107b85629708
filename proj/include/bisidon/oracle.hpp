#pragma once

#include <cstdint>
#include <set>
#include <vector>

#include "energy.hpp"
#include "rational.hpp"

namespace bisidon {

// Direct A^4 loop; the independent oracle the grouped kernels are checked
// against.
inline uint64_t energy_by_enumeration(const std::vector<Rat>& elements, Op op) {
    const auto set = as_sorted_set(elements);
    if (set.size() > 30)
        throw precondition_error("energy_by_enumeration: |A| capped at 30");
    detail::check_product_domain(set, op);
    uint64_t count = 0;
    for (const auto& a : set)
        for (const auto& b : set) {
            const Rat lhs = detail::apply_op(a, b, op);
            for (const auto& a2 : set)
                for (const auto& b2 : set)
                    if (lhs == detail::apply_op(a2, b2, op)) ++count;
        }
    return count;
}

namespace detail {

struct OracleSearch {
    std::vector<Rat> elements; // ascending
    std::vector<Rat> chosen;
    std::set<Rat> sums;
    std::set<Rat> products;
    std::vector<Rat> best;

    // a stays Sidon-compatible iff none of the new pair values repeats
    bool compatible(const Rat& a) const {
        if (sums.count(a + a) || products.count(a * a)) return false;
        for (const auto& c : chosen)
            if (sums.count(a + c) || products.count(a * c)) return false;
        return true;
    }

    void push(const Rat& a) {
        sums.insert(a + a);
        products.insert(a * a);
        for (const auto& c : chosen) {
            sums.insert(a + c);
            products.insert(a * c);
        }
        chosen.push_back(a);
    }

    void pop() {
        const Rat a = chosen.back();
        chosen.pop_back();
        sums.erase(a + a);
        products.erase(a * a);
        for (const auto& c : chosen) {
            sums.erase(a + c);
            products.erase(a * c);
        }
    }

    void dfs(size_t idx) {
        if (chosen.size() > best.size() ||
            (chosen.size() == best.size() &&
             std::lexicographical_compare(chosen.begin(), chosen.end(),
                                          best.begin(), best.end()))) {
            best = chosen;
        }
        if (idx == elements.size()) return;
        // cannot beat the incumbent even taking everything left
        if (chosen.size() + (elements.size() - idx) < best.size()) return;
        if (compatible(elements[idx])) {
            push(elements[idx]);
            dfs(idx + 1);
            pop();
        }
        dfs(idx + 1);
    }
};

} // namespace detail

// Maximum-cardinality bi-Sidon subset by branch and bound; exact, small
// scale only. Ties resolve to the lexicographically smallest set.
inline std::vector<Rat> max_bi_sidon_exact(const std::vector<Rat>& elements,
                                           size_t limit = 24) {
    const auto set = as_sorted_set(elements);
    if (set.size() > limit)
        throw precondition_error("max_bi_sidon_exact: |A| exceeds limit");
    detail::OracleSearch search;
    search.elements = set;
    search.dfs(0);
    return search.best;
}

} // namespace bisidon
