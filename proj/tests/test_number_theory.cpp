#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "akc/alpha.hpp"
#include "akc/rational.hpp"

using namespace akc;

TEST_CASE("floor and mod1 on negatives") {
    CHECK(floor_rat(BigRat(-1, 3)) == BigInt(-1));
    CHECK(mod1(BigRat(-1, 3)) == BigRat(2, 3));
    CHECK(mod1(BigRat(7, 3)) == BigRat(1, 3));
    CHECK(mod1(BigRat(0)) == BigRat(0));
}

TEST_CASE("rat_from_double is exact") {
    std::mt19937_64 gen(7);
    std::uniform_real_distribution<double> u(-10.0, 10.0);
    for (int i = 0; i < 500; ++i) {
        double x = u(gen);
        CHECK(rat_to_double(rat_from_double(x)) == x);
    }
    CHECK(rat_from_double(0.5) == BigRat(1, 2));
    CHECK(rat_from_double(-0.25) == BigRat(-1, 4));
}

TEST_CASE("rational string round trip") {
    CHECK(rat_from_string("2/5") == BigRat(2, 5));
    CHECK(rat_to_string(BigRat(2, 5)) == "2/5");
    CHECK(rat_to_string(BigRat(4)) == "4");
    CHECK_THROWS_AS(rat_from_string("1/0"), MalformedInput);
    CHECK_THROWS_AS(rat_from_string("abc"), MalformedInput);
}

TEST_CASE("continued fraction of 2/5 is [0;2,2]") {
    auto cf = continued_fraction_expand(BigRat(2, 5), 8);
    REQUIRE(cf.size() == 3);
    CHECK(cf[0] == 0);
    CHECK(cf[1] == 2);
    CHECK(cf[2] == 2);
}

TEST_CASE("pow helpers") {
    CHECK(pow_int(BigInt(10), 6) == BigInt(1000000));
    CHECK(pow_rat(BigRat(1, 2), 10) == BigRat(1, 1024));
    CHECK(pow_rat(BigRat(2), -3) == BigRat(1, 8));
}

TEST_CASE("cmp_scaled agrees with exact arithmetic") {
    std::mt19937_64 gen(11);
    std::uniform_int_distribution<int> small(1, 50);
    for (int i = 0; i < 300; ++i) {
        BigRat a(small(gen), small(gen));
        BigRat b(small(gen), small(gen));
        BigInt q(small(gen));
        long long N = small(gen) % 8;
        BigRat lhs = a * BigRat(pow_int(q, N));
        int expect = lhs < b ? -1 : (lhs > b ? 1 : 0);
        int got = cmp_scaled(a, q, N, b);
        if (expect == 0)
            CHECK(got == 0);
        else
            CHECK(got == expect);
    }
    CHECK(cmp_scaled(BigRat(1), BigInt(1), 0, BigRat(1)) == 0);
}

TEST_CASE("liouville series convergents and errors") {
    AlphaRepr a = liouville_series(10);
    CHECK(a.side == ApproachSide::lower);
    CHECK(a.convergent(1) == BigRat(1, 10));
    CHECK(a.convergent(2) == BigRat(11, 100));
    CHECK(a.error_bound(2) == BigRat(BigInt(2), pow_int(BigInt(10), 6)));
    // convergents increase, errors decrease
    for (int m = 1; m < 4; ++m) {
        CHECK(a.convergent(m) < a.convergent(m + 1));
        CHECK(a.error_bound(m) > a.error_bound(m + 1));
    }
}

TEST_CASE("exact rational alpha walks lower convergents") {
    AlphaRepr a = exact_rational_alpha(BigRat(2001, 10000));
    // deepest convergent is the value itself, error 0
    CHECK(a.convergent(a.max_index) == BigRat(2001, 10000));
    CHECK(a.error_bound(a.max_index) == 0);
    for (int m = 1; m < a.max_index; ++m) {
        CHECK(a.convergent(m) < BigRat(2001, 10000));
        CHECK(a.error_bound(m) == BigRat(2001, 10000) - a.convergent(m));
    }
    // 1/5 appears as a lower convergent
    bool seen = false;
    for (int m = 1; m <= a.max_index; ++m)
        if (a.convergent(m) == BigRat(1, 5)) seen = true;
    CHECK(seen);
}

TEST_CASE("is_lower_approximation decides both sides") {
    AlphaRepr a = liouville_series(10);
    CHECK(is_lower_approximation(a, BigRat(1, 10), 1, BigRat(1, 2)));
    // upper-side candidate rejected
    CHECK_FALSE(is_lower_approximation(a, BigRat(1, 5), 0, BigRat(1)));
    // lower but too far for a harsh (N, delta)
    CHECK_FALSE(is_lower_approximation(a, BigRat(1, 10), 30, BigRat(1, 1000)));
    CHECK_THROWS_AS(is_lower_approximation(a, BigRat(1, 10), -1, BigRat(1)), OutOfRange);
    CHECK_THROWS_AS(is_lower_approximation(a, BigRat(1, 10), 2, BigRat(0)), OutOfRange);
}

TEST_CASE("find_lower_convergent respects q_min and (N, delta)") {
    AlphaRepr a = liouville_series(10);
    CHECK(find_lower_convergent(a, 0, BigRat(1, 4), BigInt(2)) == BigRat(1, 10));
    CHECK(find_lower_convergent(a, 0, BigRat(1, 4), BigInt(10)) == BigRat(11, 100));
    // N = 0 is allowed (condition (A) shape)
    CHECK(find_lower_convergent(a, 0, BigRat(1), BigInt(1)) == BigRat(1, 10));
    CHECK_THROWS_AS(find_lower_convergent(a, 0, BigRat(0), BigInt(1)), OutOfRange);
}

TEST_CASE("find_lower_convergent never returns alpha itself") {
    AlphaRepr a = exact_rational_alpha(BigRat(1, 10) + BigRat(BigInt(1), pow_int(BigInt(10), 8)));
    BigRat c = find_lower_convergent(a, 0, BigRat(1), BigInt(2));
    CHECK(c == BigRat(1, 10));
    // q_min above every strictly-lower convergent exhausts
    CHECK_THROWS_AS(find_lower_convergent(a, 0, BigRat(1), pow_int(BigInt(10), 9)),
                    DepthExhausted);
}

TEST_CASE("theta_enclosure brackets q alpha - p") {
    AlphaRepr a = liouville_series(10);
    // theta_1 = 10 alpha - 1 = 10^-1 + 10^-5 + 10^-23 + ...
    IntervalBound t = theta_enclosure(a, BigRat(1, 10));
    CHECK(t.lo > BigRat(1, 10));
    CHECK(t.hi < BigRat(10002, 100000));
    CHECK(t.width() <= BigRat(1, 1000000));

    // exact alpha: theta is a point once the generator bottoms out
    AlphaRepr e = exact_rational_alpha(BigRat(2001, 10000));
    IntervalBound te = theta_enclosure(e, BigRat(1, 5));
    CHECK(te.lo == BigRat(1, 2000));
    CHECK(te.hi == BigRat(1, 2000));
}

TEST_CASE("theta_enclosure keeps deepening while the sign is undecided") {
    // q alpha - p is ~1e-18, far below the default width target; the
    // enclosure must still decide the sign
    AlphaRepr a = exact_rational_alpha(BigRat(1, 10) + BigRat(BigInt(1), pow_int(BigInt(10), 18)));
    IntervalBound t = theta_enclosure(a, BigRat(1, 10));
    CHECK(t.lo > 0);
    CHECK(t.hi <= BigRat(BigInt(10), pow_int(BigInt(10), 18)));
}

TEST_CASE("reflected representation flips the side") {
    AlphaRepr a = liouville_series(10);
    AlphaRepr r = reflected(a);
    CHECK(r.side == ApproachSide::upper);
    CHECK(r.convergent(1) == -a.convergent(1));
    CHECK_THROWS_AS(find_lower_convergent(r, 0, BigRat(1), BigInt(1)), MalformedInput);
}
