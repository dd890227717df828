#include <catch2/catch_amalgamated.hpp>

#include "akc/certify.hpp"
#include "akc/construction.hpp"

using namespace akc;

namespace {

AlphaRepr toy_alpha() { return exact_rational_alpha(BigRat(2001, 10000)); }

ConstructionState toy_state(int stages) {
    AlphaRepr al = toy_alpha();
    LemmaConstants consts = LemmaConstants::all_ones(8);
    ConstructionState st = stage_one(al, 1, Mode::relaxed);
    if (stages >= 2) next_stage(st, al, consts, 41);
    if (stages >= 3) next_stage(st, al, consts, 331);
    return st;
}

}  // namespace

TEST_CASE("delta_and_N spot values") {
    LemmaConstants ones = LemmaConstants::all_ones(8);
    // N = (2n+3)(n+r+1)^3
    auto [d1, n1] = delta_and_N(2, 1, 2.0, ones, 10000);
    CHECK(n1 == 448);
    CHECK(d1 > 0);
    auto [d2, n2] = delta_and_N(3, 2, 2.0, ones, 10000);
    CHECK(n2 == 1944);
    auto [d3, n3] = delta_and_N(2, 2, 2.0, ones, 10000);
    CHECK(n3 == 875);
    CHECK_THROWS_AS(delta_and_N(1, 1, 2.0, ones, 10000), OutOfRange);
}

TEST_CASE("delta_and_N overflow guard names the exponent") {
    LemmaConstants ones = LemmaConstants::all_ones(8);
    try {
        delta_and_N(2, 1, 2.0, ones, 100);
        FAIL("expected ScheduleOverflow");
    } catch (const ScheduleOverflow& e) {
        CHECK(e.computed_N == 448);
        CHECK(std::string(e.what()).find("448") != std::string::npos);
    }
}

TEST_CASE("estimate_constants is deterministic and >= 1") {
    LemmaConstants a = estimate_constants(4, 150, 42);
    LemmaConstants b = estimate_constants(4, 150, 42);
    for (int r = 1; r <= 4; ++r) {
        CHECK(a.C1(r) == b.C1(r));
        CHECK(a.C2(r) == b.C2(r));
        CHECK(a.C3(r) == b.C3(r));
        CHECK(a.C1(r) >= 1.0);
        CHECK(a.C2(r) >= 1.0);
        CHECK(a.C3(r) >= 1.0);
    }
    LemmaConstants c = estimate_constants(4, 150, 43);
    bool differs = false;
    for (int r = 1; r <= 4; ++r)
        if (c.C1(r) != a.C1(r) || c.C2(r) != a.C2(r)) differs = true;
    CHECK(differs);
}

TEST_CASE("stage one picks the first usable lower convergent") {
    ConstructionState st = toy_state(1);
    REQUIRE(st.stage_count() == 1);
    const ScheduleStage& s = st.stage(1);
    CHECK(s.alpha_n == BigRat(1, 5));
    CHECK(s.q_n == 5);
    CHECK(s.flag_A == CondFlag::pass);
    CHECK(s.flag_B == CondFlag::pass);
    // h_1 commutes with R_{1/5} and is 1/(2 q_1)-close to the identity
    CHECK(commutation_defect(st.h[0], expr::rotation(s.alpha_n)) < 1e-10);
    CHECK(displacement_sup(st.h[0]) <= 0.1 + 1e-12);
    // f_0 = R_{alpha_1}
    CHECK(expr::evaluate(st.f[0], 0.0) == Catch::Approx(0.2));
}

TEST_CASE("next_stage appends the Lemma 4.1 entry one index back") {
    ConstructionState st = toy_state(2);
    REQUIRE(st.stage_count() == 2);
    REQUIRE(st.contraction_log.size() == 1);
    CHECK(st.contraction_log[0].n == 1);
    CHECK(st.stage(2).q_n == 41);
    // covering order must strictly increase
    AlphaRepr al = toy_alpha();
    LemmaConstants ones = LemmaConstants::all_ones(8);
    CHECK_THROWS_AS(next_stage(st, al, ones, 17), ScheduleInfeasible);
}

TEST_CASE("relaxed flags record without gating") {
    ConstructionState st = toy_state(3);
    const ScheduleStage& s3 = st.stage(3);
    // q_3 = 331 < 2^8 q_2: (E) recorded as fail, construction continues
    CHECK(s3.flag_E == CondFlag::fail);
    CHECK(st.stage_count() == 3);
}

TEST_CASE("contraction_check shape") {
    ConstructionState st = toy_state(3);
    ContractionReport rep = contraction_check(st, 1, 1 << 10);
    CHECK(rep.n == 1);
    CHECK(rep.bound == Catch::Approx(std::ldexp(1.0, -3)));
    CHECK(rep.measured >= 0.0);
    CHECK(rep.corollary_bound == Catch::Approx(0.25));
    CHECK_THROWS_AS(contraction_check(st, 5, 1 << 10), OutOfRange);
}

TEST_CASE("truncate_limit tail bound") {
    ConstructionState st = toy_state(3);
    // truncating H_(2) at h_2 leaves the h_3 tail: sum 1/(2 q_3)
    TruncatedLimit t0 = truncate_limit(st, 2, 0);
    CHECK(t0.tail_bound == Catch::Approx(0.5 / 331));
    TruncatedLimit t1 = truncate_limit(st, 2, 1);
    CHECK(t1.tail_bound == 0.0);
    CHECK_THROWS_AS(truncate_limit(st, 2, 5), OutOfRange);
}

TEST_CASE("state JSON round trip") {
    ConstructionState st = toy_state(2);
    auto j = state_to_json(st);
    ConstructionState back = state_from_json(j);
    CHECK(state_to_json(back) == j);
    CHECK(back.stage_count() == st.stage_count());
    CHECK(back.stage(2).alpha_n == st.stage(2).alpha_n);
    // rebuilt expressions evaluate identically
    for (double x : {0.11, 0.53, 0.97})
        CHECK(expr::evaluate(back.H_n, x) == expr::evaluate(st.H_n, x));
}

TEST_CASE("reverify_certificates accepts its own schedule") {
    ConstructionState st = toy_state(2);
    AlphaRepr al = toy_alpha();
    CHECK(reverify_certificates(st, al).empty());
}

TEST_CASE("strict schedule certifies (A),(B1) for the factorial series") {
    AlphaRepr al = liouville_series(10);
    for (int r : {1, 2}) {
        ConstructionState st = stage_one(al, r, Mode::strict);
        CHECK(st.stage(1).q_n == 10);
        CHECK(st.stage(1).flag_A == CondFlag::pass);
        CHECK(st.stage(1).flag_B == CondFlag::pass);
    }
}

TEST_CASE("strict stage two overflow-guards on the factorial series") {
    AlphaRepr al = liouville_series(10);
    LemmaConstants consts = estimate_constants(5, 150, 1);
    ConstructionState st = stage_one(al, 1, Mode::strict);
    try {
        next_stage(st, al, consts);
        FAIL("expected ScheduleOverflow");
    } catch (const ScheduleOverflow& e) {
        CHECK(e.computed_N == 448);
    }
}
