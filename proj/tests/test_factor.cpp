#include <gtest/gtest.h>

#include "bisidon/factor.hpp"

using namespace bisidon;

TEST(factor, examples) {
    ExponentVector twelve = factorize(make_rat(12, 1));
    EXPECT_EQ(twelve, (ExponentVector{{Int(2), 2}, {Int(3), 1}}));

    ExponentVector three_quarters = factorize(make_rat(3, 4));
    EXPECT_EQ(three_quarters, (ExponentVector{{Int(2), -2}, {Int(3), 1}}));

    EXPECT_TRUE(factorize(make_rat(1, 1)).empty());
}

TEST(factor, rejects_nonpositive) {
    EXPECT_THROW(factorize(make_rat(0, 1)), precondition_error);
    EXPECT_THROW(factorize(make_rat(-3, 7)), precondition_error);
}

TEST(factor, roundtrip_random) {
    Rng rng(2024);
    for (int i = 0; i < 500; ++i) {
        Rat r = make_rat(Int(1 + rng.below(1000000)),
                         Int(1 + rng.below(1000000)));
        const auto ev = factorize(r);
        EXPECT_EQ(evaluate_exponent_vector(ev), r);
        for (const auto& [p, e] : ev) {
            EXPECT_TRUE(is_prime_u64(mpz_get_ui(p.get_mpz_t())));
            EXPECT_NE(e, 0);
        }
    }
}

TEST(factor, pollard_semiprime) {
    // both factors above the trial-division bound
    const Int a(1000003), b(1000033);
    Rat r(a * b);
    const auto ev = factorize(r);
    EXPECT_EQ(ev, (ExponentVector{{a, 1}, {b, 1}}));
}

TEST(factor, large_power) {
    Rat r(Int(1) << 200);
    EXPECT_EQ(factorize(r), (ExponentVector{{Int(2), 200}}));
}
