#pragma once

#include <chrono>
#include <cstdint>
#include <future>
#include <optional>
#include <string>
#include <vector>

#include "embedding.hpp"
#include "energy.hpp"
#include "parabola.hpp"
#include "primes.hpp"
#include "rational.hpp"
#include "rng.hpp"

namespace bisidon {

enum class Branch { additive_first, multiplicative_first };

enum class BranchChoice { automatic, additive_first, multiplicative_first };

struct ExtractorConfig {
    Rat delta = make_rat(7, 26);
    Rat c = make_rat(1, 1024); // 2^-10
    std::optional<Rat> q_override;
    std::optional<uint64_t> p_override;
    unsigned d = 2;
    unsigned trials = 32;
    unsigned embedding_retries = 16; // best-of-k
    BranchChoice branch = BranchChoice::automatic;
    bool adaptive_c = true;
    uint64_t seed = 0;
};

// Sparsification exponent delta/3 - 1/6 and the theoretical size exponent
// 1/3 + delta/3; with the default delta these are -1/13 and 33/78.
inline std::pair<Rat, Rat> config_exponents(const ExtractorConfig& cfg) {
    return {Rat(cfg.delta / 3 - make_rat(1, 6)),
            Rat(make_rat(1, 3) + cfg.delta / 3)};
}

struct ExtractionTrace {
    Branch branch_chosen = Branch::additive_first;
    std::optional<uint64_t> additive_energy;       // of the preprocessed input,
    std::optional<uint64_t> multiplicative_energy; // when the branch was automatic
    uint64_t p = 0;
    size_t size_input = 0;    // |A| after preprocessing
    size_t size_embedded = 0; // |A''|
    size_t size_B = 0;
    size_t size_Btilde = 0;
    size_t size_S = 0;
    uint64_t removed_e0 = 0; // nontrivial quadruples destroyed, by kind
    uint64_t removed_e1 = 0;
    Rat q_used = Rat(1);
    uint64_t seed = 0;
    bool negated = false;
    double wall_ms = 0.0;
};

struct BiSidonResult {
    std::vector<Rat> subset; // sorted ascending
    ExtractionTrace trace;
    bool verified = false;
};

// ---------------------------------------------------------------------------
// Pipeline stages
// ---------------------------------------------------------------------------

// Keeps the bigger of A ∩ Q>0 and (-A) ∩ Q>0 (ties: unnegated); zero is
// dropped. A bi-Sidon subset of the negated set negates back into one of A.
inline std::pair<std::vector<Rat>, bool> preprocess(
    const std::vector<Rat>& elements) {
    const auto set = as_sorted_set(elements);
    std::vector<Rat> pos, neg;
    for (const auto& a : set) {
        if (a > 0) pos.push_back(a);
        if (a < 0) neg.push_back(-a);
    }
    if (neg.size() > pos.size()) {
        std::sort(neg.begin(), neg.end());
        return {std::move(neg), true};
    }
    return {std::move(pos), false};
}

// additive_first builds an additive-Sidon B and deletes multiplicative
// quadruples; chosen when the multiplicative energy is at most the additive
// one (ties: additive_first).
inline Branch choose_branch(const std::vector<Rat>& positive_set,
                            uint64_t* additive_out = nullptr,
                            uint64_t* multiplicative_out = nullptr) {
    if (positive_set.empty())
        throw precondition_error("choose_branch: empty set");
    const uint64_t ea = additive_energy(positive_set);
    const uint64_t em = multiplicative_energy(positive_set);
    if (additive_out) *additive_out = ea;
    if (multiplicative_out) *multiplicative_out = em;
    return em <= ea ? Branch::additive_first : Branch::multiplicative_first;
}

// Smallest prime >= ceil(8 sqrt(N)); Bertrand keeps it <= 16 sqrt(N), and
// p >= 8 sqrt(N) gives N <= 2^-5 p^2 for the d = 2 embedding.
inline uint64_t select_prime(uint64_t n) {
    if (n < 1) throw precondition_error("select_prime: N >= 1");
    Int target = Int(static_cast<unsigned long>(n)) * 64;
    Int root;
    mpz_sqrt(root.get_mpz_t(), target.get_mpz_t());
    if (root * root < target) root += 1;
    return next_prime_at_least(mpz_get_ui(root.get_mpz_t()));
}

struct PullbackResult {
    EmbeddingResult embedding;
    Parabola parabola;
    std::vector<Int> subset; // B, as embedded integers, sorted
};

// B = f^{-1}(P): sample the best-of-k Freiman embedding, a uniform random
// parabola, and keep the retained elements landing on it. B is additive
// Sidon by the pullback property; checked on every call.
inline PullbackResult build_sidon_pullback(const std::vector<Int>& set,
                                           uint64_t p,
                                           const ExtractorConfig& cfg,
                                           const Rng& rng) {
    PullbackResult out;
    out.embedding =
        best_of_k_embeddings(set, p, 2, cfg.embedding_retries, rng.substream(0));
    if (!verify_freiman_homomorphism(out.embedding.embedding))
        throw std::logic_error(
            "internal error: sampled embedding failed Freiman verification");
    Rng prng = rng.substream(1);
    out.parabola = random_parabola(p, prng);
    const auto& emb = out.embedding.embedding;
    for (size_t i = 0; i < emb.retained.size(); ++i) {
        FpPoint v{emb.images[i][0], emb.images[i][1], p};
        if (out.parabola.contains(v)) out.subset.push_back(emb.retained[i]);
    }
    std::vector<Rat> as_rats;
    for (const auto& z : out.subset) as_rats.emplace_back(z);
    if (!is_additive_sidon(as_rats))
        throw std::logic_error(
            "internal error: parabola pullback is not additive Sidon");
    return out;
}

// Independent Bernoulli(q) retention; exact rational threshold against one
// uniform 64-bit draw per element.
inline std::vector<Rat> sparsify(const std::vector<Rat>& set, const Rat& q,
                                 Rng rng) {
    if (q < 0 || q > 1) throw precondition_error("sparsify: q must be in [0,1]");
    std::vector<Rat> out;
    const Int two64 = Int(1) << 64;
    for (const auto& a : set) {
        Int draw(static_cast<unsigned long>(rng.next()));
        // keep iff draw / 2^64 < q
        if (draw * q.get_den() < q.get_num() * two64) out.push_back(a);
    }
    return out;
}

struct DeletionResult {
    std::vector<Rat> survivors;
    uint64_t removed_elements = 0;
    uint64_t removed_e0 = 0; // quadruple counts destroyed, by kind
    uint64_t removed_e1 = 0;
};

// Repeatedly removes the element participating in the most remaining
// nontrivial quadruples (ties: the largest element) until none remain.
inline DeletionResult delete_quadruple_elements(const std::vector<Rat>& set,
                                                Op op) {
    DeletionResult out;
    out.survivors = as_sorted_set(set);
    {
        const auto initial = nontrivial_quadruples(out.survivors, op);
        for (const auto& q : initial)
            (q.kind == Quadruple::Kind::E0 ? out.removed_e0 : out.removed_e1)++;
    }
    while (true) {
        const auto quads = nontrivial_quadruples(out.survivors, op);
        if (quads.empty()) break;
        std::map<Rat, uint64_t> participation;
        for (const auto& q : quads) {
            // count each quadruple once per distinct element in it
            std::vector<Rat> elems(q.elements.begin(), q.elements.end());
            std::sort(elems.begin(), elems.end());
            elems.erase(std::unique(elems.begin(), elems.end()), elems.end());
            for (const auto& e : elems) ++participation[e];
        }
        Rat victim;
        uint64_t best = 0;
        for (const auto& [e, count] : participation) {
            if (count > best || (count == best && e > victim)) {
                victim = e;
                best = count;
            }
        }
        out.survivors.erase(
            std::find(out.survivors.begin(), out.survivors.end(), victim));
        ++out.removed_elements;
    }
    return out;
}

// ---------------------------------------------------------------------------
// Full pipeline
// ---------------------------------------------------------------------------

namespace detail {

struct PreparedInput {
    std::vector<Rat> positive; // sorted
    bool negated = false;
    Branch branch = Branch::additive_first;
    std::optional<uint64_t> additive_energy;
    std::optional<uint64_t> multiplicative_energy;
};

inline PreparedInput prepare_input(const std::vector<Rat>& elements,
                                   const ExtractorConfig& cfg) {
    PreparedInput pre;
    std::tie(pre.positive, pre.negated) = preprocess(elements);
    if (pre.positive.size() > 2) {
        switch (cfg.branch) {
            case BranchChoice::additive_first:
                pre.branch = Branch::additive_first;
                break;
            case BranchChoice::multiplicative_first:
                pre.branch = Branch::multiplicative_first;
                break;
            case BranchChoice::automatic: {
                uint64_t ea = 0, em = 0;
                pre.branch = choose_branch(pre.positive, &ea, &em);
                pre.additive_energy = ea;
                pre.multiplicative_energy = em;
                break;
            }
        }
    }
    return pre;
}

inline std::vector<Rat> q_pilot_values(const ExtractorConfig& cfg, size_t n) {
    const auto [q_exp, size_exp] = config_exponents(cfg);
    (void)size_exp;
    const double nx =
        std::pow(static_cast<double>(n), mpq_get_d(q_exp.get_mpq_t()));
    auto q_of_c = [&](const Rat& c) {
        Rat q = c * rat_from_double(nx);
        return q > 1 ? Rat(1) : q;
    };
    std::vector<Rat> out;
    if (cfg.q_override) {
        out.push_back(*cfg.q_override);
    } else if (cfg.adaptive_c) {
        // geometric sweep c, 2c, ..., 2^12 c, capped at q = 1
        Rat c = cfg.c;
        for (int j = 0; j <= 12; ++j, c *= 2) {
            Rat q = q_of_c(c);
            if (out.empty() || q != out.back()) out.push_back(q);
            if (q == 1) break;
        }
    } else {
        out.push_back(q_of_c(cfg.c));
    }
    return out;
}

inline BiSidonResult extract_prepared(const PreparedInput& pre,
                                      const ExtractorConfig& cfg,
                                      const Rng& rng) {
    const auto start = std::chrono::steady_clock::now();
    BiSidonResult result;
    auto& trace = result.trace;
    trace.branch_chosen = pre.branch;
    trace.additive_energy = pre.additive_energy;
    trace.multiplicative_energy = pre.multiplicative_energy;
    trace.negated = pre.negated;
    trace.seed = rng.seed();
    trace.size_input = pre.positive.size();

    const auto finish = [&](std::vector<Rat> subset) {
        if (pre.negated)
            for (auto& a : subset) a = -a;
        std::sort(subset.begin(), subset.end());
        if (!is_bi_sidon(subset))
            throw std::logic_error("internal error: extraction result failed "
                                   "bi-Sidon verification");
        result.subset = std::move(subset);
        result.verified = true;
        trace.size_S = result.subset.size();
        trace.wall_ms = std::chrono::duration<double, std::milli>(
                            std::chrono::steady_clock::now() - start)
                            .count();
        return result;
    };

    // degenerate guarantee: any set of size <= 2 is bi-Sidon
    if (pre.positive.size() <= 2) {
        trace.size_embedded = trace.size_B = trace.size_Btilde =
            pre.positive.size();
        return finish(pre.positive);
    }

    if (cfg.d != 2)
        throw precondition_error(
            "extract: the parabola pullback requires d = 2");

    // Integer model of the positive set. additive_first clears denominators
    // (a dilation, an additive Freiman isomorphism); multiplicative_first
    // swaps roles through the radix embedding, shifted to positive values.
    const size_t n = pre.positive.size();
    std::vector<Int> model(n);
    if (pre.branch == Branch::additive_first) {
        Int lcm(1);
        for (const auto& a : pre.positive)
            mpz_lcm(lcm.get_mpz_t(), lcm.get_mpz_t(), a.get_den().get_mpz_t());
        for (size_t i = 0; i < n; ++i)
            model[i] = pre.positive[i].get_num() *
                       (lcm / pre.positive[i].get_den());
    } else {
        const auto radix = multiplicative_to_additive_embedding(pre.positive);
        Int shift = 1 - *std::min_element(radix.images.begin(),
                                          radix.images.end());
        for (size_t i = 0; i < n; ++i)
            model[i] = radix.image_of(pre.positive[i]) + shift;
    }
    std::map<Int, Rat> back;
    for (size_t i = 0; i < n; ++i) back.emplace(model[i], pre.positive[i]);

    const uint64_t p =
        cfg.p_override ? *cfg.p_override : select_prime(n);
    trace.p = p;

    const auto pull = build_sidon_pullback(model, p, cfg, rng.substream(0));
    trace.size_embedded = pull.embedding.embedding.retained.size();
    std::vector<Rat> b_set;
    for (const auto& z : pull.subset) b_set.push_back(back.at(z));
    std::sort(b_set.begin(), b_set.end());
    trace.size_B = b_set.size();

    // In additive_first coordinates B is additive Sidon and we delete
    // multiplicative quadruples; multiplicative_first is the mirror image.
    const Op delete_op =
        pre.branch == Branch::additive_first ? Op::product : Op::sum;

    std::vector<Rat> best_subset;
    bool have = false;
    const auto pilots = q_pilot_values(cfg, n);
    for (size_t j = 0; j < pilots.size(); ++j) {
        auto btilde = sparsify(b_set, pilots[j], rng.substream(2 + j));
        auto deleted = delete_quadruple_elements(btilde, delete_op);
        if (!have || deleted.survivors.size() > best_subset.size()) {
            have = true;
            best_subset = deleted.survivors;
            trace.q_used = pilots[j];
            trace.size_Btilde = btilde.size();
            trace.removed_e0 = deleted.removed_e0;
            trace.removed_e1 = deleted.removed_e1;
        }
    }
    // degenerate guarantee: any one or two elements form a bi-Sidon set, so
    // a near-empty pipeline result falls back to the smallest elements (the
    // trace then describes the fallback route, like the |A| <= 2 case)
    const size_t floor_size = std::min<size_t>(2, n);
    if (best_subset.size() < floor_size) {
        best_subset.assign(pre.positive.begin(),
                           pre.positive.begin() + floor_size);
        trace.size_embedded = trace.size_B = trace.size_Btilde = floor_size;
    }
    return finish(std::move(best_subset));
}

} // namespace detail

inline BiSidonResult extract_once(const std::vector<Rat>& elements,
                                  const ExtractorConfig& cfg, const Rng& rng) {
    return detail::extract_prepared(detail::prepare_input(elements, cfg), cfg,
                                    rng);
}

// Best subset over cfg.trials independent runs, one substream per trial
// (ties: lexicographically smallest subset). Trials execute concurrently;
// the result only depends on (input, cfg.seed).
inline BiSidonResult extract(const std::vector<Rat>& elements,
                             const ExtractorConfig& cfg) {
    if (cfg.trials < 1) throw precondition_error("extract: trials >= 1");
    const auto pre = detail::prepare_input(elements, cfg);
    std::vector<std::future<BiSidonResult>> futures;
    futures.reserve(cfg.trials);
    for (unsigned t = 0; t < cfg.trials; ++t) {
        futures.push_back(std::async(std::launch::async, [&pre, &cfg, t] {
            return detail::extract_prepared(
                pre, cfg, Rng(derive_stream(cfg.seed, t)));
        }));
    }
    BiSidonResult best;
    bool have = false;
    for (auto& f : futures) {
        BiSidonResult r = f.get();
        const bool better =
            !have || r.subset.size() > best.subset.size() ||
            (r.subset.size() == best.subset.size() &&
             std::lexicographical_compare(r.subset.begin(), r.subset.end(),
                                          best.subset.begin(),
                                          best.subset.end()));
        if (better) {
            best = std::move(r);
            have = true;
        }
    }
    return best;
}

} // namespace bisidon
