#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <random>

#include "akc/expr.hpp"
#include "akc/moebius.hpp"
#include "akc/norms.hpp"

using namespace akc;

namespace {

MapPtr random_expr(std::mt19937_64& gen, int depth) {
    std::uniform_real_distribution<double> ang(0.0, 1.0);
    std::uniform_real_distribution<double> aa(0.5, 0.9);
    std::uniform_int_distribution<int> pick(0, 3), qq(2, 7);
    if (depth <= 0) {
        return pick(gen) % 2 ? expr::rotation(ang(gen))
                             : expr::moebius(MoebiusMap::from_a(aa(gen)));
    }
    switch (pick(gen)) {
        case 0: return expr::moebius(MoebiusMap::from_a(aa(gen)));
        case 1: return expr::lift(expr::moebius(MoebiusMap::from_a(aa(gen))), qq(gen));
        case 2: return expr::compose(random_expr(gen, depth - 1), random_expr(gen, depth - 1));
        default: return expr::inverse(random_expr(gen, depth - 1));
    }
}

}  // namespace

TEST_CASE("wrap01 and cyclic helpers") {
    CHECK(wrap01(1.25) == 0.25);
    CHECK(wrap01(-0.25) == 0.75);
    CHECK(cyc_gap(0.9, 0.1) == Catch::Approx(0.2));
    CHECK(cyc_dist(0.9, 0.1) == Catch::Approx(0.2));
    CHECK(cyclic_ordered(0.1, 0.5, 0.9));
    CHECK_FALSE(cyclic_ordered(0.1, 0.9, 0.5));
}

TEST_CASE("moebius frozen values at a = 1/2") {
    MoebiusMap k = MoebiusMap::from_a(0.5);
    CHECK(k.t == Catch::Approx(1.0 / 3.0).epsilon(1e-15));
    // atan(1/3)/pi at x = 1/4
    CHECK(moebius_apply(k, 0.25) == Catch::Approx(0.10241638234956672).epsilon(1e-14));
    // fixed points and their multipliers
    CHECK(moebius_apply(k, 0.0) == 0.0);
    CHECK(moebius_apply(k, 0.5) == Catch::Approx(0.5));
    CHECK(moebius_derivative(k, 0.0) == Catch::Approx(1.0 / 3.0));
    CHECK(moebius_derivative(k, 0.5) == Catch::Approx(3.0));
    // rho(1/2) = arccos(1/2)/(2 pi) = 1/6; I(khat) = [1/3, 2/3]
    CHECK(rho(k) == Catch::Approx(1.0 / 6.0).epsilon(1e-15));
    CircleInterval I = expanding_interval(k);
    CHECK(I.left == Catch::Approx(1.0 / 3.0));
    CHECK(I.right == Catch::Approx(2.0 / 3.0));
}

TEST_CASE("derivative closed form (1-a^2)/(1+2a cos 2pi x + a^2)") {
    for (double a : {0.5, 0.75, 0.9, 0.99}) {
        MoebiusMap k = MoebiusMap::from_a(a);
        for (int i = 0; i < 1000; ++i) {
            double x = i / 1000.0;
            double ref = (1 - a * a) / (1 + 2 * a * std::cos(2 * M_PI * x) + a * a);
            CHECK(moebius_derivative(k, x) == Catch::Approx(ref).margin(1e-12));
        }
    }
}

TEST_CASE("rho equals the root of Dkhat = 1") {
    for (double a : {0.5, 0.75, 0.9, 0.99}) {
        MoebiusMap k = MoebiusMap::from_a(a);
        // bisect khat'(1/2 - r) = 1 on r in (0, 1/2)
        double lo = 0.0, hi = 0.25;
        for (int it = 0; it < 200; ++it) {
            double mid = 0.5 * (lo + hi);
            (moebius_derivative(k, 0.5 - mid) >= 1.0 ? lo : hi) = mid;
        }
        CHECK(rho(k) == Catch::Approx(0.5 * (lo + hi)).margin(1e-10));
        CHECK(rho(k) == Catch::Approx(std::acos(a) / (2 * M_PI)).margin(1e-14));
    }
}

TEST_CASE("solve_a_for_rho round trip") {
    for (double target : {1e-12, 1e-6, 0.01, 0.05, 1.0 / 6.0}) {
        MoebiusMap k = solve_a_for_rho(target);
        CHECK(rho(k) == Catch::Approx(target).epsilon(1e-12));
    }
    CHECK_THROWS_AS(solve_a_for_rho(0.2), OutOfRange);
    CHECK_THROWS_AS(solve_a_for_rho(0.0), OutOfRange);
}

TEST_CASE("moebius inverse round trip") {
    std::mt19937_64 gen(3);
    std::uniform_real_distribution<double> u(0.0, 1.0), aa(0.5, 0.99);
    for (int i = 0; i < 200; ++i) {
        MoebiusMap k = MoebiusMap::from_a(aa(gen));
        double x = u(gen);
        CHECK(cyc_dist(moebius_apply_inverse(k, moebius_apply(k, x)), x) < 1e-12);
    }
}

TEST_CASE("moebius jets match finite differences") {
    std::mt19937_64 gen(5);
    std::uniform_real_distribution<double> u(0.0, 1.0), aa(0.5, 0.9);
    const double h = 1e-4;
    for (int i = 0; i < 100; ++i) {
        MoebiusMap k = MoebiusMap::from_a(aa(gen));
        double x = u(gen);
        Jet j = moebius_jet(k, x, 2);
        double fp = moebius_derivative(k, x);
        CHECK(j.d[1] == Catch::Approx(fp).epsilon(1e-10));
        double fd2 = (moebius_derivative(k, x + h) - moebius_derivative(k, x - h)) / (2 * h);
        CHECK(j.d[2] == Catch::Approx(fd2).margin(1e-2 * (1.0 + std::fabs(fd2))));
    }
}

TEST_CASE("lift commutes with rotation by 1/q") {
    for (long long q : {2, 5, 10, 32}) {
        MapPtr h = expr::lift(expr::moebius(MoebiusMap::from_a(0.7)), q);
        MapPtr rot = expr::rotation(BigRat(1, q));
        double worst = 0.0;
        for (int i = 0; i < (1 << 12); ++i) {
            double x = i / static_cast<double>(1 << 12);
            worst = std::max(worst, cyc_dist(expr::evaluate(h, wrap01(x + 1.0 / q)),
                                             wrap01(expr::evaluate(h, x) + 1.0 / q)));
        }
        CHECK(worst < 1e-12);
    }
}

TEST_CASE("lift fixes the fibers of moebius fixed points") {
    long long q = 7;
    MapPtr h = expr::lift(expr::moebius(MoebiusMap::from_a(0.6)), q);
    for (long long i = 0; i < q; ++i) {
        double x = i / static_cast<double>(q);
        CHECK(cyc_dist(expr::evaluate(h, x), x) < 1e-13);
    }
}

TEST_CASE("evaluate_inverse inverts random expressions") {
    std::mt19937_64 gen(9);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int i = 0; i < 100; ++i) {
        MapPtr e = random_expr(gen, 3);
        double x = u(gen);
        CHECK(cyc_dist(expr::evaluate_inverse(e, expr::evaluate(e, x)), x) < 1e-9);
    }
}

TEST_CASE("rational evaluation agrees with double evaluation") {
    std::mt19937_64 gen(13);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int i = 0; i < 50; ++i) {
        MapPtr e = random_expr(gen, 3);
        double x = u(gen);
        double via_rat = rat_to_double(expr::evaluate_rat(e, rat_from_double(x)));
        CHECK(cyc_dist(via_rat, expr::evaluate(e, x)) < 1e-9);
        double via_rat_inv = rat_to_double(expr::evaluate_inverse_rat(e, rat_from_double(x)));
        CHECK(cyc_dist(via_rat_inv, expr::evaluate_inverse(e, x)) < 1e-9);
    }
}

TEST_CASE("rational evaluation resolves below double ulp") {
    // two inputs 1e-30 apart stay distinct through a stiff map
    MoebiusMap k = solve_a_for_rho(1e-10);
    MapPtr e = expr::moebius(k);
    BigRat x(1, 4);
    BigRat dx = BigRat(BigInt(1), pow_int(BigInt(10), 30));
    BigRat y1 = expr::evaluate_rat(e, x), y2 = expr::evaluate_rat(e, x + dx);
    CHECK(y2 > y1);
    BigRat diff = y2 - y1;
    CHECK(diff < BigRat(BigInt(1), pow_int(BigInt(10), 25)));
}

TEST_CASE("expression jets match finite differences") {
    std::mt19937_64 gen(17);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    const double h = 1e-5;
    int checked = 0;
    for (int i = 0; i < 60; ++i) {
        MapPtr e = random_expr(gen, 2);
        double x = u(gen);
        Jet j = expr::evaluate_jet(e, x, 2);
        auto lift_near = [&](double t) {
            double v = expr::evaluate(e, t);
            // unwrap against the center value
            return j.d[0] + signed_disp(j.d[0], v);
        };
        double fd1 = (lift_near(x + h) - lift_near(x - h)) / (2 * h);
        if (std::fabs(j.d[1]) > 1e3) continue;  // stiff spot: FD step invalid
        CHECK(j.d[1] == Catch::Approx(fd1).epsilon(1e-3).margin(1e-6));
        ++checked;
    }
    CHECK(checked >= 30);
}

TEST_CASE("expression JSON round trip") {
    std::mt19937_64 gen(21);
    for (int i = 0; i < 30; ++i) {
        MapPtr e = random_expr(gen, 3);
        auto j = expr::to_json(e);
        MapPtr back = expr::from_json(j);
        CHECK(expr::to_json(back) == j);
        // a moebius node built straight from t re-serializes through a(t),
        // one ulp away; structural stability is exact, evaluation near-exact
        for (double x : {0.1, 0.37, 0.92})
            CHECK(cyc_dist(expr::evaluate(back, x), expr::evaluate(e, x)) < 1e-13);
    }
    CHECK_THROWS_AS(expr::from_json(nlohmann::json{{"bogus", 1}}), MalformedInput);
}

TEST_CASE("norms of simple maps") {
    MapPtr rot = expr::rotation(BigRat(1, 3));
    CHECK(displacement_sup(rot) == Catch::Approx(1.0 / 3.0));
    CHECK(cr_norm(rot, 1) == Catch::Approx(1.0).margin(1e-9));
    MapPtr h = expr::lift(expr::moebius(MoebiusMap::from_a(0.7)), 5);
    // ||h - id||_0 <= 1/(2q)
    CHECK(displacement_sup(h) <= 0.5 / 5 + 1e-12);
    CHECK(commutation_defect(h, expr::rotation(BigRat(1, 5))) < 1e-12);
}
