#include <gtest/gtest.h>

#include <cmath>
#include <numeric>
#include <set>

#include "bisidon/extractor.hpp"
#include "bisidon/oracle.hpp"

using namespace bisidon;

static std::vector<Rat> ints(std::initializer_list<long> v) {
    std::vector<Rat> out;
    for (long x : v) out.push_back(make_rat(x));
    return out;
}

static std::vector<Rat> interval(long n) {
    std::vector<Rat> out;
    for (long i = 1; i <= n; ++i) out.push_back(make_rat(i));
    return out;
}

TEST(extractor, config_exponents_self_check) {
    ExtractorConfig cfg;
    auto [q_exp, size_exp] = config_exponents(cfg);
    EXPECT_EQ(q_exp, make_rat(-1, 13));
    EXPECT_EQ(size_exp, make_rat(33, 78));
}

TEST(extractor, preprocess_examples) {
    auto [a, neg_a] = preprocess(ints({-1, -2, 3}));
    EXPECT_EQ(a, ints({1, 2}));
    EXPECT_TRUE(neg_a);

    auto [b, neg_b] = preprocess(ints({1, 2}));
    EXPECT_EQ(b, ints({1, 2}));
    EXPECT_FALSE(neg_b);

    auto [c, neg_c] = preprocess(ints({0}));
    EXPECT_TRUE(c.empty());
    EXPECT_FALSE(neg_c);

    // tie: unnegated side wins
    auto [d, neg_d] = preprocess(ints({-5, -3, 1, 2}));
    EXPECT_EQ(d, ints({1, 2}));
    EXPECT_FALSE(neg_d);
}

TEST(extractor, choose_branch_examples) {
    uint64_t ea = 0, em = 0;
    EXPECT_EQ(choose_branch(interval(10), &ea, &em), Branch::additive_first);
    EXPECT_EQ(ea, 670u); // (2n^3 + n)/3 at n = 10
    EXPECT_LT(em, 670u);

    std::vector<Rat> powers;
    for (long i = 1; i <= 10; ++i) powers.push_back(make_rat(1L << i));
    EXPECT_EQ(choose_branch(powers, &ea, &em), Branch::multiplicative_first);
    EXPECT_EQ(ea, 190u);
    EXPECT_EQ(em, 670u);

    // equal energies (both Sidon) -> additive_first
    EXPECT_EQ(choose_branch(ints({1, 2, 5, 7})), Branch::additive_first);
    EXPECT_THROW(choose_branch({}), precondition_error);
}

TEST(extractor, select_prime_examples) {
    EXPECT_EQ(select_prime(16), 37u);
    EXPECT_EQ(select_prime(1), 11u);
    EXPECT_THROW(select_prime(0), precondition_error);
}

TEST(extractor, select_prime_window_exhaustive) {
    // 8 sqrt(N) <= p <= 16 sqrt(N) for N in 1..10^6; p only depends on
    // ceil(8 sqrt(N)), so memoize next_prime by that value
    uint64_t last_m = 0, last_p = 0;
    for (uint64_t n = 1; n <= 1000000; ++n) {
        Int t = Int(static_cast<unsigned long>(n)) * 64;
        Int r;
        mpz_sqrt(r.get_mpz_t(), t.get_mpz_t());
        if (r * r < t) r += 1;
        const uint64_t m = mpz_get_ui(r.get_mpz_t());
        if (m != last_m) {
            last_m = m;
            last_p = select_prime(n);
        }
        const Int p(static_cast<unsigned long>(last_p));
        // 64 n <= p^2 <= 256 n
        ASSERT_LE(t, p * p) << n;
        ASSERT_LE(p * p, Int(static_cast<unsigned long>(n)) * 256) << n;
    }
}

TEST(extractor, sparsify_edges_and_statistics) {
    auto b = interval(300);
    EXPECT_EQ(sparsify(b, Rat(1), Rng(1)), b);
    EXPECT_TRUE(sparsify(b, Rat(0), Rng(1)).empty());
    EXPECT_THROW(sparsify(b, make_rat(3, 2), Rng(1)), precondition_error);
    EXPECT_THROW(sparsify(b, make_rat(-1, 2), Rng(1)), precondition_error);

    // mean retention within 3 sigma of q = 1/3 over 10^4 runs of |B| = 300
    const Rat q = make_rat(1, 3);
    Rng rng(2468);
    uint64_t kept = 0;
    const int runs = 10000;
    for (int i = 0; i < runs; ++i)
        kept += sparsify(b, q, rng.substream(i)).size();
    const double n = 300.0 * runs;
    const double mean = kept / n;
    const double sigma = std::sqrt((1.0 / 3) * (2.0 / 3) / n);
    EXPECT_NEAR(mean, 1.0 / 3, 3 * sigma);
}

TEST(extractor, deletion_examples) {
    auto r = delete_quadruple_elements(ints({1, 2, 3}), Op::sum);
    EXPECT_EQ(r.survivors, ints({1, 2})); // 1+3 = 2+2; 3 is largest in the tie
    EXPECT_EQ(r.removed_elements, 1u);
    EXPECT_EQ(r.removed_e0, 0u);
    EXPECT_EQ(r.removed_e1, 1u);

    // 2*6 = 3*4: one E0 quadruple, exactly one removal
    auto s = delete_quadruple_elements(ints({2, 3, 4, 6}), Op::product);
    EXPECT_EQ(s.removed_elements, 1u);
    EXPECT_EQ(s.survivors.size(), 3u);
    EXPECT_EQ(s.removed_e0, 1u);
    EXPECT_EQ(s.removed_e1, 0u);
    EXPECT_TRUE(is_multiplicative_sidon(s.survivors));

    // 4^2 = 2*8 (E1)
    auto t = delete_quadruple_elements(ints({2, 4, 8}), Op::product);
    EXPECT_EQ(t.removed_elements, 1u);
    EXPECT_TRUE(is_multiplicative_sidon(t.survivors));

    // Sidon input untouched
    auto u = delete_quadruple_elements(ints({1, 2, 5, 7}), Op::sum);
    EXPECT_EQ(u.survivors, ints({1, 2, 5, 7}));
    EXPECT_EQ(u.removed_elements, 0u);
}

TEST(extractor, deletion_counts_consistent) {
    Rng rng(13);
    for (int trial = 0; trial < 20; ++trial) {
        std::set<Rat> s;
        while (s.size() < 20) s.insert(make_rat(Int(1 + rng.below(60)), Int(1)));
        std::vector<Rat> a(s.begin(), s.end());
        for (Op op : {Op::sum, Op::product}) {
            auto r = delete_quadruple_elements(a, op);
            EXPECT_EQ(r.survivors.size() + r.removed_elements, a.size());
            EXPECT_LE(r.removed_elements, r.removed_e0 + r.removed_e1);
            EXPECT_TRUE(nontrivial_quadruples(r.survivors, op).empty());
            EXPECT_TRUE(std::includes(a.begin(), a.end(), r.survivors.begin(),
                                      r.survivors.end()));
        }
    }
}

TEST(extractor, pullback_sidon_and_mean_size) {
    // mean |B| over 200 trials >= (1/8) |A| / p - 3 sigma for A = {1..1024}
    std::vector<Int> a(1024);
    std::iota(a.begin(), a.end(), 1);
    const uint64_t p = select_prime(1024); // next prime >= 256
    ExtractorConfig cfg;
    cfg.embedding_retries = 1; // plain samples: the bound is about one draw
    Rng rng(31415);
    double total = 0;
    const int runs = 200;
    std::vector<double> sizes;
    for (int i = 0; i < runs; ++i) {
        auto pull = build_sidon_pullback(a, p, cfg, rng.substream(i));
        sizes.push_back(double(pull.subset.size()));
        total += sizes.back();
        std::vector<Rat> as_rats;
        for (const auto& z : pull.subset) as_rats.emplace_back(z);
        ASSERT_TRUE(is_additive_sidon(as_rats));
    }
    const double mean = total / runs;
    double var = 0;
    for (double s : sizes) var += (s - mean) * (s - mean);
    var /= runs - 1;
    const double sem = std::sqrt(var / runs);
    EXPECT_GE(mean, 1024.0 / (8.0 * p) - 3 * sem);
}

TEST(extractor, pullback_empty_input) {
    ExtractorConfig cfg;
    auto pull = build_sidon_pullback({}, 11, cfg, Rng(3));
    EXPECT_TRUE(pull.subset.empty());
}

TEST(extractor, extract_once_tiny_inputs) {
    ExtractorConfig cfg;
    auto r = extract_once(ints({1, 2}), cfg, Rng(0));
    EXPECT_EQ(r.subset, ints({1, 2}));
    EXPECT_TRUE(r.verified);

    auto e = extract_once({}, cfg, Rng(0));
    EXPECT_TRUE(e.subset.empty());
    EXPECT_TRUE(e.verified);

    auto n = extract_once(ints({-7, -3, 2}), cfg, Rng(0));
    EXPECT_EQ(n.subset, ints({-7, -3}));
    EXPECT_TRUE(n.trace.negated);
}

TEST(extractor, extract_soundness_and_trace) {
    Rng rng(902);
    for (int trial = 0; trial < 25; ++trial) {
        std::set<Rat> s;
        size_t n = 3 + rng.below(60);
        while (s.size() < n) {
            Rat v = make_rat(Int(1 + rng.below(3000)), Int(1 + rng.below(5)));
            if (rng.below(4) == 0) v = -v;
            if (trial % 5 == 0 && s.empty()) s.insert(Rat(0));
            s.insert(v);
        }
        std::vector<Rat> a(s.begin(), s.end());
        ExtractorConfig cfg;
        cfg.trials = 4;
        cfg.seed = trial;
        auto r = extract(a, cfg);
        EXPECT_TRUE(r.verified);
        EXPECT_TRUE(is_bi_sidon(r.subset));
        for (const auto& v : r.subset)
            EXPECT_TRUE(std::binary_search(a.begin(), a.end(), v));
        const auto& tr = r.trace;
        EXPECT_LE(tr.size_S, tr.size_Btilde);
        EXPECT_LE(tr.size_Btilde, tr.size_B);
        EXPECT_LE(tr.size_B, tr.size_embedded);
        EXPECT_LE(tr.size_embedded, tr.size_input);
        EXPECT_EQ(tr.size_S, r.subset.size());
    }
}

TEST(extractor, trials_one_matches_substream_zero) {
    ExtractorConfig cfg;
    cfg.trials = 1;
    cfg.seed = 77;
    auto a = interval(64);
    auto multi = extract(a, cfg);
    auto single = extract_once(a, cfg, Rng(derive_stream(cfg.seed, 0)));
    EXPECT_EQ(multi.subset, single.subset);
    EXPECT_EQ(multi.trace.size_Btilde, single.trace.size_Btilde);
}

TEST(extractor, best_size_nondecreasing_in_trials) {
    auto a = interval(128);
    ExtractorConfig cfg;
    cfg.seed = 5;
    size_t prev = 0;
    for (unsigned t : {1u, 2u, 4u, 8u}) {
        cfg.trials = t;
        size_t got = extract(a, cfg).subset.size();
        EXPECT_GE(got, prev);
        prev = got;
    }
}

TEST(extractor, deterministic_across_runs) {
    auto a = interval(200);
    ExtractorConfig cfg;
    cfg.trials = 8;
    cfg.seed = 404;
    auto r1 = extract(a, cfg);
    auto r2 = extract(a, cfg);
    EXPECT_EQ(r1.subset, r2.subset);
    EXPECT_EQ(r1.trace.q_used, r2.trace.q_used);
    EXPECT_EQ(r1.trace.seed, r2.trace.seed);
}

TEST(extractor, overrides_respected) {
    auto a = interval(100);
    ExtractorConfig cfg;
    cfg.trials = 2;
    cfg.q_override = make_rat(1, 4);
    cfg.p_override = 89;
    auto r = extract(a, cfg);
    EXPECT_EQ(r.trace.q_used, make_rat(1, 4));
    EXPECT_EQ(r.trace.p, 89u);
    EXPECT_TRUE(r.verified);

    ExtractorConfig bad;
    bad.d = 3;
    EXPECT_THROW(extract(a, bad), precondition_error);
    ExtractorConfig zero;
    zero.trials = 0;
    EXPECT_THROW(extract(a, zero), precondition_error);
}

TEST(extractor, q_pilot_values_formula) {
    ExtractorConfig cfg;
    cfg.adaptive_c = false;
    // q = min(1, c N^(-1/13)) -> with c = 1 and N = 1, q = 1
    cfg.c = Rat(1);
    auto one = detail::q_pilot_values(cfg, 1);
    ASSERT_EQ(one.size(), 1u);
    EXPECT_EQ(one[0], Rat(1));
    cfg.c = make_rat(1, 1024);
    auto q = detail::q_pilot_values(cfg, 4096);
    ASSERT_EQ(q.size(), 1u);
    EXPECT_GT(q[0], 0);
    EXPECT_LE(q[0], make_rat(1, 1024)); // N^(-1/13) <= 1

    cfg.adaptive_c = true;
    auto sweep = detail::q_pilot_values(cfg, 4096);
    EXPECT_GT(sweep.size(), 1u);
    EXPECT_LE(sweep.size(), 13u);
    for (size_t i = 1; i < sweep.size(); ++i) EXPECT_GT(sweep[i], sweep[i - 1]);
    EXPECT_LE(sweep.back(), 1);

    cfg.q_override = make_rat(1, 7);
    auto forced = detail::q_pilot_values(cfg, 4096);
    EXPECT_EQ(forced, std::vector<Rat>{make_rat(1, 7)});
}

TEST(extractor, branch_symmetry_geometric_vs_interval) {
    // {2^i} under the automatic branch radix-embeds to the integer model of
    // {1..10}, so the |S| distributions of the two mirror pipelines should
    // coincide; Mann-Whitney rank test over seeds, two-sided, alpha = 0.01
    std::vector<Rat> powers;
    for (long i = 1; i <= 10; ++i) powers.push_back(make_rat(1L << i));
    const int seeds = 60;
    std::vector<double> x, y;
    for (int seed = 0; seed < seeds; ++seed) {
        ExtractorConfig cg;
        cg.trials = 2;
        cg.seed = seed;
        auto rg = extract(powers, cg);
        EXPECT_EQ(rg.trace.branch_chosen, Branch::multiplicative_first);
        x.push_back(double(rg.subset.size()));

        ExtractorConfig ci;
        ci.trials = 2;
        ci.seed = 100000 + seed; // independent seeds for the second arm
        ci.branch = BranchChoice::additive_first;
        y.push_back(double(extract(interval(10), ci).subset.size()));
    }
    // U statistic with midranks and tie-corrected normal approximation
    std::vector<std::pair<double, int>> pooled;
    for (double v : x) pooled.push_back({v, 0});
    for (double v : y) pooled.push_back({v, 1});
    std::sort(pooled.begin(), pooled.end());
    const size_t n = pooled.size();
    std::vector<double> rank(n);
    double tie_term = 0;
    for (size_t i = 0; i < n;) {
        size_t j = i;
        while (j < n && pooled[j].first == pooled[i].first) ++j;
        const double mid = (i + 1 + j) / 2.0;
        for (size_t k = i; k < j; ++k) rank[k] = mid;
        const double t = double(j - i);
        tie_term += t * t * t - t;
        i = j;
    }
    double r1 = 0;
    for (size_t i = 0; i < n; ++i)
        if (pooled[i].second == 0) r1 += rank[i];
    const double n1 = seeds, n2 = seeds;
    const double u = r1 - n1 * (n1 + 1) / 2;
    const double mu = n1 * n2 / 2;
    const double var =
        n1 * n2 / 12.0 * ((n + 1) - tie_term / (n * (n - 1.0)));
    if (var == 0) {
        // every observation tied across both arms: identical distributions
        EXPECT_EQ(x, y);
        return;
    }
    const double z = (u - mu) / std::sqrt(var);
    EXPECT_LT(std::abs(z), 2.576); // two-sided 1% critical value
}

TEST(extractor, oracle_dominates_small_inputs) {
    Rng rng(321);
    for (int trial = 0; trial < 10; ++trial) {
        std::set<Rat> s;
        while (s.size() < 10) s.insert(make_rat(Int(1 + rng.below(40)), Int(1)));
        std::vector<Rat> a(s.begin(), s.end());
        ExtractorConfig cfg;
        cfg.trials = 4;
        cfg.seed = trial;
        auto r = extract(a, cfg);
        auto best = max_bi_sidon_exact(a);
        EXPECT_LE(r.subset.size(), best.size());
        EXPECT_TRUE(is_bi_sidon(best));
    }
}
