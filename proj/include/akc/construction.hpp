#pragma once

#include <cmath>
#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "akc/alpha.hpp"
#include "akc/expr.hpp"
#include "akc/moebius.hpp"
#include "akc/norms.hpp"
#include "akc/rational.hpp"

namespace akc {

enum class Provenance { configured, empirical };

struct LemmaConstants {
    std::vector<double> c1;  // c1[r], index 0 unused
    std::vector<double> c2;
    std::vector<double> c3;
    Provenance provenance = Provenance::configured;

    double C1(int r) const { return at(c1, r, "C1"); }
    double C2(int r) const { return at(c2, r, "C2"); }
    double C3(int r) const { return at(c3, r, "C3"); }

    static LemmaConstants all_ones(int r_max) {
        LemmaConstants c;
        c.c1.assign(static_cast<size_t>(r_max) + 1, 1.0);
        c.c2 = c.c1;
        c.c3 = c.c1;
        return c;
    }

  private:
    static double at(const std::vector<double>& v, int r, const char* name) {
        if (r < 1 || r >= static_cast<int>(v.size()))
            throw OutOfRange(std::string(name) + ": no constant tabulated for this r");
        double x = v[static_cast<size_t>(r)];
        if (x < 1.0) throw OutOfRange(std::string(name) + ": constant must be >= 1");
        return x;
    }
};

enum class CondFlag { pass, fail, not_checked };

inline const char* cond_flag_name(CondFlag f) {
    switch (f) {
        case CondFlag::pass: return "pass";
        case CondFlag::fail: return "fail";
        default: return "not_checked";
    }
}

enum class Mode { strict, relaxed };

struct ScheduleStage {
    int n = 1;
    int r = 1;
    BigRat alpha_n;     // = p_n / q_n (q_n is the covering denominator below)
    BigInt q_n;         // covering order; equals alpha_n's reduced denominator
                        // except for relaxed overrides
    MoebiusMap k_n{0.5};
    BigRat delta{0};    // 0 when not applicable (stage 1, relaxed without (C))
    long long N = 0;
    double L_prev = 1.0;
    Mode mode = Mode::strict;
    CondFlag flag_A = CondFlag::not_checked;
    CondFlag flag_B = CondFlag::not_checked;
    CondFlag flag_C = CondFlag::not_checked;
    CondFlag flag_D = CondFlag::not_checked;
    CondFlag flag_E = CondFlag::not_checked;

    long long q_ll() const {
        if (q_n > BigInt(1'000'000'000'000LL))
            throw OutOfRange("ScheduleStage: q_n too large for orbit-scale work");
        return q_n.convert_to<long long>();
    }
};

struct ContractionEntry {
    int n = 0;          // the Lemma 4.1 index
    double measured = 0.0;
    double bound = 0.0;
    bool pass = false;
};

struct ConstructionState {
    int r = 1;
    Mode mode = Mode::strict;
    double safety = 4.0;   // multiplies grid norm estimates inside (C)/(D)
    int norm_grid = 1 << 12;
    long long n_cap = 100;  // overflow guard on the condition (C) exponent
    std::vector<ScheduleStage> stages;
    std::vector<MapPtr> h;       // h[i] is h_{i+1}
    MapPtr H_n = expr::identity();
    std::vector<MapPtr> f;       // f[m] = H_m R_{alpha_{m+1}} H_m^{-1}; f[0] = R_{alpha_1}
    std::vector<ContractionEntry> contraction_log;

    int stage_count() const { return static_cast<int>(stages.size()); }
    const ScheduleStage& stage(int n) const {
        if (n < 1 || n > stage_count()) throw OutOfRange("ConstructionState: no such stage");
        return stages[static_cast<size_t>(n - 1)];
    }
    // latest fully determined f_m (m = stage_count - 1)
    MapPtr current_f() const {
        if (f.empty()) throw OutOfRange("ConstructionState: no stage built");
        return f.back();
    }
};

namespace detail {

inline CondFlag check_rho_roundtrip(const MoebiusMap& k, const BigRat& target, double tol = 1e-9) {
    double want = rat_to_double(target);
    double got = rho(k);
    return (std::fabs(got - want) <= tol * want) ? CondFlag::pass : CondFlag::fail;
}

inline MoebiusMap moebius_for_stage(const BigInt& q, int n) {
    BigRat target = BigRat(1) / pow_int(BigInt(q), n + 1);
    double t_rho = rat_to_double(target);
    if (!(t_rho > 0.0))
        throw ScheduleInfeasible("target expanding-interval radius underflows double");
    try {
        return solve_a_for_rho(t_rho);
    } catch (const OutOfRange&) {
        throw ScheduleInfeasible(
            "q_n^{-(n+1)} > 1/6: pick a deeper convergent so the radius is admissible");
    }
}

// f_{m} = H_m R_{alpha_{m+1}} H_m^{-1}, built structurally
inline MapPtr conjugate_rotation_expr(const MapPtr& H, const BigRat& angle) {
    return expr::compose({H, expr::rotation(angle), expr::inverse(H)});
}

}  // namespace detail

// delta and N of condition (C). H_prev_norm must already carry the safety
// factor; the result is exact in rational arithmetic, hence a valid lower
// bound whenever the inputs upper-bound the true norms and constants.
inline std::pair<BigRat, long long> delta_and_N(int n, int r, double H_prev_norm,
                                                const LemmaConstants& consts,
                                                long long n_cap = 100) {
    if (n < 2) throw OutOfRange("delta_and_N: n >= 2 required");
    if (r < 1) throw OutOfRange("delta_and_N: r >= 1 required");
    if (H_prev_norm < 1.0) throw OutOfRange("delta_and_N: H_prev_norm >= 1 required");
    long long N = static_cast<long long>(2 * n + 3) * static_cast<long long>(n + r + 1) *
                  (n + r + 1) * (n + r + 1);
    if (N > n_cap)
        throw ScheduleOverflow(
            "delta_and_N: condition (C) exponent N = " + std::to_string(N) +
                " exceeds the configured cap",
            N);
    int s = n + r + 1;
    BigRat delta = BigRat(1, pow_int(BigInt(2), s));
    delta /= rat_from_double(consts.C2(n + r));
    delta /= pow_rat(rat_from_double(consts.C1(s)), s);
    delta /= pow_rat(rat_from_double(consts.C3(s)), s * s);
    delta /= pow_rat(rat_from_double(H_prev_norm), s * s);
    return {delta, N};
}

inline ConstructionState stage_one(const AlphaRepr& alpha, int r, Mode mode = Mode::strict,
                                   double safety = 4.0, int norm_grid = 1 << 12,
                                   long long n_cap = 100) {
    if (r < 1) throw OutOfRange("stage_one: r >= 1 required");
    ConstructionState st;
    st.r = r;
    st.mode = mode;
    st.safety = safety;
    st.norm_grid = norm_grid;
    st.n_cap = n_cap;

    // (A): alpha_1 = first convergent with 0 < alpha - alpha_1 < 2^{-(r+1)},
    // q_1 >= 3 so the stage radius q_1^{-2} <= 1/9 < 1/6 is admissible
    BigRat bound_A = BigRat(1, pow_int(BigInt(2), r + 1));
    BigRat a1 = find_lower_convergent(alpha, 0, bound_A, BigInt(2));

    ScheduleStage s;
    s.n = 1;
    s.r = r;
    s.mode = mode;
    s.alpha_n = a1;
    s.q_n = den(a1);
    s.L_prev = 1.0;
    s.flag_A = CondFlag::pass;  // certified by find_lower_convergent
    s.k_n = detail::moebius_for_stage(s.q_n, 1);
    s.flag_B = detail::check_rho_roundtrip(s.k_n, BigRat(1) / pow_int(s.q_n, 2));

    MapPtr h1 = expr::lift(expr::moebius(s.k_n), s.q_ll());
    double defect = commutation_defect(h1, expr::rotation(a1));
    if (defect > 1e-10)
        throw ToleranceNotMet("stage_one: h_1 fails to commute with R_{alpha_1}");

    st.stages.push_back(s);
    st.h.push_back(h1);
    st.H_n = h1;
    st.f.push_back(expr::rotation(a1));  // f_0 = R_{alpha_1}
    return st;
}

// Build stage n >= 2. Choosing alpha_n completes f_{n-1}, so the Lemma 4.1
// entry appended here carries index n-1.
inline void next_stage(ConstructionState& st, const AlphaRepr& alpha,
                       const LemmaConstants& consts,
                       std::optional<long long> override_q = std::nullopt) {
    if (st.stage_count() < 1) throw OutOfRange("next_stage: run stage_one first");
    int n = st.stage_count() + 1;
    int r = st.r;
    const ScheduleStage& prev = st.stages.back();

    ScheduleStage s;
    s.n = n;
    s.r = r;
    s.mode = st.mode;
    s.L_prev = std::max(derivative_sup(st.H_n, st.norm_grid, false),
                        derivative_sup(st.H_n, st.norm_grid, true));

    if (st.mode == Mode::strict) {
        double hnorm = st.safety * cr_norm(st.H_n, n + r + 1, st.norm_grid);
        auto [delta, N] = delta_and_N(n, r, hnorm, consts, st.n_cap);
        s.delta = delta;
        s.N = N;
        // (E) lower bound feeds the search so (C),(E) come out together
        BigInt q_min = pow_int(BigInt(2), n + 5) * prev.q_n;
        s.alpha_n = find_lower_convergent(alpha, N, delta, q_min);
        s.q_n = den(s.alpha_n);
        s.flag_C = CondFlag::pass;
        s.flag_E = (s.q_n > pow_int(BigInt(2), n + 5) * prev.q_n) ? CondFlag::pass
                                                                  : CondFlag::fail;
        // (D) with the safety factor on the grid estimate of L_{n-1}
        BigRat lhs = BigRat(s.q_n);
        BigRat rhs = pow_int(BigInt(2), n) * rat_from_double(st.safety * s.L_prev);
        s.flag_D = (lhs > rhs) ? CondFlag::pass : CondFlag::fail;
        if (s.flag_D != CondFlag::pass || s.flag_E != CondFlag::pass)
            throw ScheduleInfeasible("next_stage: (D) or (E) failed on the chosen convergent");
    } else {
        if (override_q) {
            BigInt q(*override_q);
            if (q <= prev.q_n) throw ScheduleInfeasible("next_stage: q_n must increase");
            // alpha_n = floor(q alpha)/q using the deepest convergent as proxy
            BigRat approx = alpha.convergent(alpha.max_index);
            BigInt p = floor_rat(BigRat(q) * approx);
            s.alpha_n = BigRat(p, q);
            s.q_n = q;  // covering order as given, even if p/q reduces
        } else {
            s.alpha_n = find_lower_convergent(alpha, 0, BigRat(1), prev.q_n + 1);
            s.q_n = den(s.alpha_n);
        }
        // record, never require
        try {
            double hnorm = st.safety * cr_norm(st.H_n, n + r + 1, st.norm_grid);
            auto [delta, N] = delta_and_N(n, r, hnorm, consts, st.n_cap);
            s.delta = delta;
            s.N = N;
            s.flag_C = is_lower_approximation(alpha, s.alpha_n, N, delta) ? CondFlag::pass
                                                                          : CondFlag::fail;
        } catch (const ScheduleOverflow&) {
            s.flag_C = CondFlag::not_checked;
        } catch (const IndeterminatePrecision&) {
            s.flag_C = CondFlag::not_checked;
        }
        s.flag_D = (BigRat(s.q_n) > pow_int(BigInt(2), n) * rat_from_double(s.L_prev))
                       ? CondFlag::pass
                       : CondFlag::fail;
        s.flag_E = (s.q_n > pow_int(BigInt(2), n + 5) * prev.q_n) ? CondFlag::pass
                                                                  : CondFlag::fail;
    }

    s.k_n = detail::moebius_for_stage(s.q_n, n);
    s.flag_B = detail::check_rho_roundtrip(s.k_n, BigRat(1) / pow_int(s.q_n, n + 1));

    MapPtr hn = expr::lift(expr::moebius(s.k_n), s.q_ll());
    double defect = commutation_defect(hn, expr::rotation(s.alpha_n));
    if (defect > 1e-10)
        throw ToleranceNotMet("next_stage: h_n fails to commute with R_{alpha_n}");
    double disp = displacement_sup(hn);
    if (disp > 0.5 * rat_to_double(BigRat(1, s.q_n)) + 1e-12)
        throw ToleranceNotMet("next_stage: ||h_n - id||_0 exceeds (2 q_n)^{-1}");

    MapPtr H_prev = st.H_n;
    st.stages.push_back(s);
    st.h.push_back(hn);
    st.H_n = expr::compose(H_prev, hn);

    // alpha_n completes f_{n-1}
    st.f.push_back(detail::conjugate_rotation_expr(H_prev, s.alpha_n));
    int m = n - 1;  // Lemma 4.1 index now measurable
    ContractionEntry e;
    e.n = m;
    e.bound = std::ldexp(1.0, -(m + r + 1));
    e.measured = dr_distance(st.f[static_cast<size_t>(m - 1)],
                             st.f[static_cast<size_t>(m)], m + r, st.norm_grid);
    e.pass = e.measured < e.bound;
    st.contraction_log.push_back(e);
}

struct ContractionReport {
    int n = 0;
    double measured = 0.0;
    double bound = 0.0;
    bool pass = false;
    double running_sum_r = 0.0;   // sum of d_r(f_{m-1}, f_m), m = 1..n
    double corollary_bound = 0.0;  // 2^{-(r+1)}
    bool corollary_pass = false;
};

inline ContractionReport contraction_check(const ConstructionState& st, int n, int grid) {
    if (n < 1 || n + 1 > static_cast<int>(st.f.size()))
        throw OutOfRange("contraction_check: f_n not yet determined at this n");
    ContractionReport rep;
    rep.n = n;
    rep.bound = std::ldexp(1.0, -(n + st.r + 1));
    rep.measured = dr_distance(st.f[static_cast<size_t>(n - 1)], st.f[static_cast<size_t>(n)],
                               n + st.r, grid);
    rep.pass = rep.measured < rep.bound;
    for (int m = 1; m <= n; ++m)
        rep.running_sum_r += dr_distance(st.f[static_cast<size_t>(m - 1)],
                                         st.f[static_cast<size_t>(m)], st.r, grid);
    rep.corollary_bound = std::ldexp(1.0, -(st.r + 1));
    rep.corollary_pass = rep.running_sum_r <= rep.corollary_bound;
    return rep;
}

struct TruncatedLimit {
    MapPtr map;
    double tail_bound = 0.0;
    bool bounded = true;  // false when (E) failed somewhere and the tail is open-ended
};

// H_(from) ~ h_from ... h_{from+K}; the C^0 tail collects 0.5/q_i over the
// dropped stages, extended geometrically past the last built stage when (E)
// held throughout.
inline TruncatedLimit truncate_limit(const ConstructionState& st, int from_stage, int K) {
    int last = st.stage_count();
    if (from_stage < 1 || from_stage + K > last)
        throw OutOfRange("truncate_limit: stages out of range");
    std::vector<MapPtr> parts;
    for (int i = from_stage; i <= from_stage + K; ++i)
        parts.push_back(st.h[static_cast<size_t>(i - 1)]);
    TruncatedLimit out;
    out.map = expr::compose(parts);
    for (int i = from_stage + K + 1; i <= last; ++i)
        out.tail_bound += 0.5 * rat_to_double(BigRat(1, st.stage(i).q_n));
    bool all_E = true;
    for (int i = 2; i <= last; ++i)
        if (st.stage(i).flag_E != CondFlag::pass) all_E = false;
    if (all_E) {
        // beyond stage `last`: q_{m+1} > 2^{last+6} q_m, so the leftover sum
        // is below 0.5 q_last^{-1} / (2^{last+6} - 1)
        double q_last = rat_to_double(BigRat(1, st.stage(last).q_n));
        out.tail_bound += 0.5 * q_last / (std::ldexp(1.0, last + 6) - 1.0);
    } else {
        out.bounded = false;
    }
    return out;
}

namespace detail {

struct Rng {
    std::mt19937_64 g;
    explicit Rng(uint64_t seed) : g(seed) {}
    // uniform in [lo, hi); avoids uniform_real_distribution, whose stream is
    // implementation-defined
    double uniform(double lo, double hi) {
        return lo + (hi - lo) * (static_cast<double>(g() >> 11) * 0x1p-53);
    }
    int uniform_int(int lo, int hi) {  // inclusive
        return lo + static_cast<int>(g() % static_cast<uint64_t>(hi - lo + 1));
    }
};

inline MapPtr random_map(Rng& rng, int depth) {
    int kind = rng.uniform_int(0, depth > 0 ? 3 : 1);
    switch (kind) {
        case 0: return expr::rotation(rng.uniform(0.0, 1.0));
        case 1: return expr::moebius(MoebiusMap::from_a(rng.uniform(0.5, 0.95)));
        case 2: return expr::lift(expr::moebius(MoebiusMap::from_a(rng.uniform(0.5, 0.95))),
                                  rng.uniform_int(2, 6));
        default:
            return expr::compose(random_map(rng, depth - 1), random_map(rng, depth - 1));
    }
}

}  // namespace detail

// Empirical C1/C2/C3 per Lemmas 2.1, 2.2, 2.4: smallest constant covering
// every sampled instance, doubled for safety. Deterministic given seed.
inline LemmaConstants estimate_constants(int r_max, int samples, uint64_t seed) {
    if (r_max < 1) throw OutOfRange("estimate_constants: r_max >= 1 required");
    if (samples < 100) throw OutOfRange("estimate_constants: samples >= 100 required");
    detail::Rng rng(seed);
    LemmaConstants out;
    out.provenance = Provenance::empirical;
    out.c1.assign(static_cast<size_t>(r_max) + 1, 1.0);
    out.c2 = out.c1;
    out.c3 = out.c1;
    const int grid = 1 << 10;
    for (int r = 1; r <= r_max; ++r) {
        double w1 = 1.0, w2 = 1.0, w3 = 1.0;
        for (int i = 0; i < samples; ++i) {
            MapPtr fm = detail::random_map(rng, 1);
            MapPtr gm = detail::random_map(rng, 1);
            double nf = cr_norm(fm, r, grid), ng = cr_norm(gm, r, grid);
            double nfg = cr_norm(expr::compose(fm, gm), r, grid);
            w1 = std::max(w1, nfg / (std::pow(nf, r) * std::pow(ng, r)));

            MapPtr H = detail::random_map(rng, 1);
            double a = rng.uniform(0.0, 1.0);
            double b = a + rng.uniform(1e-6, 1e-3);
            MapPtr ca = detail::conjugate_rotation_expr(H, rat_from_double(a));
            MapPtr cb = detail::conjugate_rotation_expr(H, rat_from_double(b));
            double d = dr_distance(ca, cb, r, grid);
            double hn = cr_norm(H, r + 1, grid);
            w2 = std::max(w2, d / (std::pow(hn, r + 1) * (b - a)));

            MoebiusMap k = MoebiusMap::from_a(rng.uniform(0.5, 0.999));
            double nk = cr_norm(expr::moebius(k), r, grid);
            w3 = std::max(w3, nk * std::pow(rho(k), 2 * r));
        }
        out.c1[static_cast<size_t>(r)] = 2.0 * w1;
        out.c2[static_cast<size_t>(r)] = 2.0 * w2;
        out.c3[static_cast<size_t>(r)] = 2.0 * w3;
    }
    return out;
}

// -- serialization ----------------------------------------------------------

inline nlohmann::json stage_to_json(const ScheduleStage& s) {
    nlohmann::json j;
    j["n"] = s.n;
    j["r"] = s.r;
    j["alpha_n"] = rat_to_string(s.alpha_n);
    j["q_n"] = s.q_n.str();
    j["t_n"] = s.k_n.t;
    j["delta"] = rat_to_string(s.delta);
    j["N"] = s.N;
    j["L_prev"] = s.L_prev;
    j["mode"] = (s.mode == Mode::strict) ? "strict" : "relaxed";
    j["flags"] = {{"A", cond_flag_name(s.flag_A)}, {"B", cond_flag_name(s.flag_B)},
                  {"C", cond_flag_name(s.flag_C)}, {"D", cond_flag_name(s.flag_D)},
                  {"E", cond_flag_name(s.flag_E)}};
    return j;
}

inline CondFlag flag_from_json(const std::string& s) {
    if (s == "pass") return CondFlag::pass;
    if (s == "fail") return CondFlag::fail;
    if (s == "not_checked") return CondFlag::not_checked;
    throw MalformedInput("unknown condition flag: " + s);
}

inline ScheduleStage stage_from_json(const nlohmann::json& j) {
    ScheduleStage s;
    s.n = j.at("n").get<int>();
    s.r = j.at("r").get<int>();
    s.alpha_n = rat_from_string(j.at("alpha_n").get<std::string>());
    s.q_n = BigInt(j.at("q_n").get<std::string>());
    s.k_n = MoebiusMap::from_t(j.at("t_n").get<double>());
    s.delta = rat_from_string(j.at("delta").get<std::string>());
    s.N = j.at("N").get<long long>();
    s.L_prev = j.at("L_prev").get<double>();
    s.mode = (j.at("mode").get<std::string>() == "strict") ? Mode::strict : Mode::relaxed;
    const auto& fl = j.at("flags");
    s.flag_A = flag_from_json(fl.at("A").get<std::string>());
    s.flag_B = flag_from_json(fl.at("B").get<std::string>());
    s.flag_C = flag_from_json(fl.at("C").get<std::string>());
    s.flag_D = flag_from_json(fl.at("D").get<std::string>());
    s.flag_E = flag_from_json(fl.at("E").get<std::string>());
    return s;
}

inline nlohmann::json state_to_json(const ConstructionState& st) {
    nlohmann::json j;
    j["r"] = st.r;
    j["mode"] = (st.mode == Mode::strict) ? "strict" : "relaxed";
    j["safety"] = st.safety;
    j["norm_grid"] = st.norm_grid;
    j["n_cap"] = st.n_cap;
    j["stages"] = nlohmann::json::array();
    for (const auto& s : st.stages) j["stages"].push_back(stage_to_json(s));
    j["h"] = nlohmann::json::array();
    for (const auto& e : st.h) j["h"].push_back(expr::to_json(e));
    j["H_n"] = expr::to_json(st.H_n);
    j["f"] = nlohmann::json::array();
    for (const auto& e : st.f) j["f"].push_back(expr::to_json(e));
    j["contraction_log"] = nlohmann::json::array();
    for (const auto& e : st.contraction_log)
        j["contraction_log"].push_back(
            {{"n", e.n}, {"measured", e.measured}, {"bound", e.bound}, {"pass", e.pass}});
    return j;
}

inline ConstructionState state_from_json(const nlohmann::json& j) {
    ConstructionState st;
    st.r = j.at("r").get<int>();
    st.mode = (j.at("mode").get<std::string>() == "strict") ? Mode::strict : Mode::relaxed;
    st.safety = j.at("safety").get<double>();
    st.norm_grid = j.at("norm_grid").get<int>();
    st.n_cap = j.at("n_cap").get<long long>();
    for (const auto& sj : j.at("stages")) st.stages.push_back(stage_from_json(sj));
    for (const auto& ej : j.at("h")) st.h.push_back(expr::from_json(ej));
    st.H_n = expr::from_json(j.at("H_n"));
    for (const auto& ej : j.at("f")) st.f.push_back(expr::from_json(ej));
    for (const auto& ej : j.at("contraction_log")) {
        ContractionEntry e;
        e.n = ej.at("n").get<int>();
        e.measured = ej.at("measured").get<double>();
        e.bound = ej.at("bound").get<double>();
        e.pass = ej.at("pass").get<bool>();
        st.contraction_log.push_back(e);
    }
    return st;
}

// Re-derive the stored exact-inequality certificates from a deserialized
// state. Returns the list of human-readable failures (empty = all good).
inline std::vector<std::string> reverify_certificates(const ConstructionState& st,
                                                      const AlphaRepr& alpha) {
    std::vector<std::string> bad;
    for (int n = 1; n <= st.stage_count(); ++n) {
        const ScheduleStage& s = st.stage(n);
        std::string tag = "stage " + std::to_string(n) + ": ";
        if (n == 1 && s.flag_A == CondFlag::pass) {
            BigRat bound = BigRat(1, pow_int(BigInt(2), s.r + 1));
            if (!is_lower_approximation(alpha, s.alpha_n, 0, bound)) bad.push_back(tag + "(A)");
        }
        if (s.flag_C == CondFlag::pass && s.N > 0) {
            try {
                if (!is_lower_approximation(alpha, s.alpha_n, s.N, s.delta))
                    bad.push_back(tag + "(C)");
            } catch (const IndeterminatePrecision&) {
                bad.push_back(tag + "(C) indeterminate");
            }
        }
        if (n >= 2) {
            const ScheduleStage& p = st.stage(n - 1);
            bool e_ok = s.q_n > pow_int(BigInt(2), n + 5) * p.q_n;
            if ((s.flag_E == CondFlag::pass) != e_ok) bad.push_back(tag + "(E)");
            bool d_ok = BigRat(s.q_n) >
                        pow_int(BigInt(2), n) *
                            rat_from_double((st.mode == Mode::strict ? st.safety : 1.0) *
                                            s.L_prev);
            if ((s.flag_D == CondFlag::pass) != d_ok) bad.push_back(tag + "(D)");
        }
    }
    return bad;
}

}  // namespace akc
