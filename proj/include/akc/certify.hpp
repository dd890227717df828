#pragma once

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "akc/construction.hpp"
#include "akc/dynamics.hpp"
#include "akc/measure.hpp"

namespace akc {

enum class TriFlag { pass, fail, marginal };

inline const char* tri_flag_name(TriFlag f) {
    switch (f) {
        case TriFlag::pass: return "pass";
        case TriFlag::fail: return "fail";
        default: return "marginal";
    }
}

inline TriFlag tri_flag_from(const std::string& s) {
    if (s == "pass") return TriFlag::pass;
    if (s == "fail") return TriFlag::fail;
    if (s == "marginal") return TriFlag::marginal;
    throw MalformedInput("unknown flag value: " + s);
}

enum class CertProvenance { constructed, supplied };

struct BnCertificate {
    int n = 1;
    long long q_n = 2;
    long long l_n = 1;
    long long m_n = 0;
    std::vector<double> c;  // q_n points
    std::vector<double> d;
    TriFlag flag_a = TriFlag::fail;
    TriFlag flag_b = TriFlag::fail;
    TriFlag flag_c = TriFlag::fail;
    TriFlag flag_d = TriFlag::fail;
    TriFlag flag_e = TriFlag::fail;
    // min signed margin backing each flag (positive = strict pass)
    double margin_a = 0.0, margin_b = 0.0, margin_c = 0.0, margin_d = 0.0, margin_e = 0.0;
    CertProvenance provenance = CertProvenance::constructed;

    void validate_shape() const {
        if (static_cast<long long>(c.size()) != q_n ||
            static_cast<long long>(d.size()) != q_n)
            throw MalformedCertificate("certificate point lists must have q_n entries");
        if (q_n <= n) throw MalformedCertificate("q_n > n required");
    }
};

struct GeometryRecord {
    std::string name;
    double lhs = 0.0;
    double rhs = 0.0;
    bool pass = false;
};

struct GeometryReport {
    int n = 1;
    std::vector<GeometryRecord> records;
    bool all_pass() const {
        for (const auto& r : records)
            if (!r.pass) return false;
        return true;
    }
};

namespace detail {

constexpr double kGuardBand = 1e-10;

inline TriFlag flag_from_margin(double m) {
    if (m > kGuardBand) return TriFlag::pass;
    if (m < -kGuardBand) return TriFlag::fail;
    return TriFlag::marginal;
}

// applies f k times
inline double iterate(const MapPtr& f, double x, long long k) {
    for (long long i = 0; i < k; ++i) x = expr::evaluate(f, x);
    return x;
}

struct Stepper {
    // either brute force through f, or fast-forward through the conjugacy
    const MapPtr* f = nullptr;
    const ConjugateRotation* conj = nullptr;
    long long q = 1;

    double power(double x, long long k) const {  // f^{k q}(x)
        if (conj) return conj->power_apply(k * q, x);
        BigRat y = rat_from_double(wrap01(x));
        for (long long i = 0; i < k * q; ++i) y = expr::evaluate_rat(*f, y);
        return rat_to_double(y);
    }
};

// distance from x to the interval [a,b] along the circle (0 when inside)
inline double cyc_dist_to(double x, double a, double b) {
    if (CircleInterval{a, b}.contains(x)) return 0.0;
    return std::min(cyc_gap(b, x), cyc_gap(x, a));
}

// orbit conditions (d),(e) with the guard band; margins are min over the
// whole orbit family
inline void orbit_flags(BnCertificate& cert, const Stepper& st) {
    long long span = (1LL << cert.n) * cert.l_n;
    double md = 1.0;
    for (long long i = 0; i < cert.q_n; ++i) {
        double ci = cert.c[static_cast<size_t>(i)], di = cert.d[static_cast<size_t>(i)];
        double x = ci;
        for (long long k = 1; k <= span; ++k) {
            x = st.power(x, 1);
            double m = CircleInterval{ci, di}.contains_open(x)
                           ? std::min(cyc_gap(ci, x), cyc_gap(x, di))
                           : -std::max(cyc_dist_to(x, ci, di), 1e-300);
            md = std::min(md, m);
            if (md < -kGuardBand) break;
        }
        if (md < -kGuardBand) break;
    }
    cert.margin_d = md;
    cert.flag_d = flag_from_margin(md);

    double me = -1.0;
    for (long long i = 0; i < cert.q_n; ++i) {
        double di = cert.d[static_cast<size_t>(i)];
        double cn = cert.c[static_cast<size_t>((i + 1) % cert.q_n)];
        double x = st.power(di, cert.l_n);
        // pass when x is strictly outside [d_i, c_{i+1}]
        double m;
        if (CircleInterval{di, cn}.contains(x))
            m = -std::min(cyc_gap(di, x), cyc_gap(x, cn));
        else
            m = std::min(cyc_gap(cn, x), cyc_gap(x, di));
        me = (i == 0) ? m : std::min(me, m);
    }
    cert.margin_e = me;
    cert.flag_e = flag_from_margin(me);
}

// flags (a)-(c) from precomputed interval lengths and gaps (used when the
// points themselves are too close for double subtraction to resolve)
inline void static_flags_from(BnCertificate& cert, const std::vector<double>& lens,
                              const std::vector<double>& gaps) {
    double ma = 1.0, max_len = 0.0, min_gap = 1.0;
    double s = 0.0;
    for (size_t i = 0; i < lens.size(); ++i) {
        ma = std::min({ma, lens[i], gaps[i]});
        max_len = std::max(max_len, lens[i]);
        min_gap = std::min(min_gap, gaps[i]);
        s += lens[i] + gaps[i];
    }
    if (std::fabs(s - 1.0) > 1e-9) ma = -1.0;
    cert.margin_a = ma;
    cert.flag_a = flag_from_margin(ma);
    double bound_b = std::pow(static_cast<double>(cert.q_n), -cert.n);
    cert.margin_b = bound_b - max_len;
    cert.flag_b = flag_from_margin(cert.margin_b);
    cert.margin_c = min_gap / cert.n - max_len;
    cert.flag_c = flag_from_margin(cert.margin_c);
}

inline void static_flags(BnCertificate& cert) {
    long long q = cert.q_n;
    // (a) cyclic order c_1 < d_1 < c_2 < ... ; measure the worst gap
    double ma = 1.0;
    for (long long i = 0; i < q; ++i) {
        double ci = cert.c[static_cast<size_t>(i)], di = cert.d[static_cast<size_t>(i)];
        double cn = cert.c[static_cast<size_t>((i + 1) % q)];
        ma = std::min({ma, cyc_gap(ci, di), cyc_gap(di, cn)});
    }
    // degenerate orderings show up as near-full gaps elsewhere; verify the
    // 2q gaps sum to 1
    double s = 0.0;
    for (long long i = 0; i < q; ++i) {
        s += cyc_gap(cert.c[static_cast<size_t>(i)], cert.d[static_cast<size_t>(i)]);
        s += cyc_gap(cert.d[static_cast<size_t>(i)],
                     cert.c[static_cast<size_t>((i + 1) % q)]);
    }
    if (std::fabs(s - 1.0) > 1e-9) ma = -1.0;
    cert.margin_a = ma;
    cert.flag_a = flag_from_margin(ma);

    double max_len = 0.0, min_gap = 1.0;
    for (long long i = 0; i < q; ++i) {
        max_len = std::max(max_len,
                           cyc_gap(cert.c[static_cast<size_t>(i)],
                                   cert.d[static_cast<size_t>(i)]));
        min_gap = std::min(min_gap,
                           cyc_gap(cert.d[static_cast<size_t>(i)],
                                   cert.c[static_cast<size_t>((i + 1) % q)]));
    }
    // (b) max length < q^{-n}
    double bound_b = std::pow(static_cast<double>(q), -cert.n);
    cert.margin_b = bound_b - max_len;
    cert.flag_b = flag_from_margin(cert.margin_b);
    // (c) max length < n^{-1} min gap
    cert.margin_c = min_gap / cert.n - max_len;
    cert.flag_c = flag_from_margin(cert.margin_c);
}

}  // namespace detail

// Certificate for stage n from the built state, truncating H_(n) at
// h_{n+K}. Orbit flags use fast-forward conjugate iteration with
// alpha_proxy, a rational deeper than every stage's alpha.
inline BnCertificate build_certificate(const ConstructionState& state, int n, int K,
                                       const AlphaRepr& alpha) {
    if (n < 1 || n + K > state.stage_count())
        throw OutOfRange("build_certificate: stages through n+K required");
    const ScheduleStage& s = state.stage(n);
    long long q = s.q_ll();
    if (q <= n) throw MalformedInput("build_certificate: q_n > n required");

    BnCertificate cert;
    cert.n = n;
    cert.q_n = q;
    cert.provenance = CertProvenance::constructed;

    // lifted copies of I(k_hat^{-1}): centered on the fibers of 0, radius
    // rho/q = q^{-(n+2)}
    // the radius is far below double resolution at deep stages, so the prime
    // points and everything derived from them stay rational until the end
    BigRat radius = BigRat(1) / BigRat(pow_int(BigInt(q), n + 2));
    TruncatedLimit Hn = truncate_limit(state, n, K);
    double budget = std::ldexp(1.0, -(n + 5)) / static_cast<double>(q);
    if (Hn.tail_bound > budget)
        throw TruncationInsufficient("build_certificate: truncation tail exceeds budget");

    std::vector<BigRat> cp(static_cast<size_t>(q)), dp(static_cast<size_t>(q));
    std::vector<BigRat> cpp(static_cast<size_t>(q)), dpp(static_cast<size_t>(q));
    for (long long i = 0; i < q; ++i) {
        BigRat fiber(i, q);
        cp[static_cast<size_t>(i)] = mod1(fiber - radius);
        dp[static_cast<size_t>(i)] = mod1(fiber + radius);
        cpp[static_cast<size_t>(i)] =
            expr::evaluate_inverse_rat(Hn.map, cp[static_cast<size_t>(i)]);
        dpp[static_cast<size_t>(i)] =
            expr::evaluate_inverse_rat(Hn.map, dp[static_cast<size_t>(i)]);
    }
    auto rgap = [](const BigRat& a, const BigRat& b) { return rat_to_double(mod1(b - a)); };

    // theta = q_n alpha - p_n, exact enclosure
    IntervalBound theta = theta_enclosure(alpha, s.alpha_n);
    long long m_min = -1, l_max = 1;
    double gap_max = 0.0;
    for (long long i = 0; i < q; ++i) {
        double len = rgap(cpp[static_cast<size_t>(i)], dpp[static_cast<size_t>(i)]);
        double gap = rgap(dpp[static_cast<size_t>(i)],
                          cpp[static_cast<size_t>((i + 1) % q)]);
        long long m = return_count(theta, len);
        long long l = exit_count(theta, gap);
        m_min = (m_min < 0) ? m : std::min(m_min, m);
        l_max = std::max(l_max, l);
        gap_max = std::max(gap_max, gap);
    }
    cert.m_n = m_min;
    cert.l_n = l_max;

    // c_i = H_{n-1} c'_i (equivalently H c''_i with the full limit H)
    MapPtr Hprev = expr::identity();
    if (n >= 2) {
        std::vector<MapPtr> parts(state.h.begin(), state.h.begin() + (n - 1));
        Hprev = expr::compose(parts);
    }
    cert.c.resize(static_cast<size_t>(q));
    cert.d.resize(static_cast<size_t>(q));
    std::vector<double> lens(static_cast<size_t>(q)), gaps(static_cast<size_t>(q));
    {
        std::vector<BigRat> cr(static_cast<size_t>(q)), dr(static_cast<size_t>(q));
        for (long long i = 0; i < q; ++i) {
            cr[static_cast<size_t>(i)] =
                expr::evaluate_rat(Hprev, cp[static_cast<size_t>(i)]);
            dr[static_cast<size_t>(i)] =
                expr::evaluate_rat(Hprev, dp[static_cast<size_t>(i)]);
            cert.c[static_cast<size_t>(i)] = rat_to_double(cr[static_cast<size_t>(i)]);
            cert.d[static_cast<size_t>(i)] = rat_to_double(dr[static_cast<size_t>(i)]);
        }
        for (long long i = 0; i < q; ++i) {
            lens[static_cast<size_t>(i)] =
                rgap(cr[static_cast<size_t>(i)], dr[static_cast<size_t>(i)]);
            gaps[static_cast<size_t>(i)] = rgap(dr[static_cast<size_t>(i)],
                                                cr[static_cast<size_t>((i + 1) % q)]);
        }
    }

    detail::static_flags_from(cert, lens, gaps);

    // (d),(e) in rotation coordinates: f^{kq}(c_i) in (c_i, d_i) iff
    // R_alpha^{kq}(c''_i) in (c''_i, d''_i) since H is an order isomorphism,
    // so the count comparison m_n >= 2^n l_n decides (d) exactly, and l_n's
    // defining step exits every gap
    long long need = (1LL << n) * cert.l_n;
    cert.margin_d = static_cast<double>(cert.m_n - need);
    cert.flag_d = (cert.m_n >= need) ? TriFlag::pass : TriFlag::fail;
    double theta_lo = rat_to_double(theta.lo);
    cert.margin_e = static_cast<double>(cert.l_n) * theta_lo - gap_max;
    cert.flag_e = detail::flag_from_margin(cert.margin_e);
    if (static_cast<double>(cert.l_n) * rat_to_double(theta.hi) > 0.25) {
        // exit step wrapped too far around the circle to conclude anything
        cert.flag_e = TriFlag::marginal;
    }
    return cert;
}

// Re-check every flag by brute-force iteration of f itself.
inline BnCertificate check_certificate(const MapPtr& f, BnCertificate cert,
                                       long long k_budget) {
    cert.validate_shape();
    long long span = (1LL << cert.n) * cert.l_n;
    if (span * cert.q_n > k_budget)
        throw BudgetExceeded("check_certificate: orbit span exceeds k_budget");
    detail::static_flags(cert);
    detail::Stepper st;
    st.f = &f;
    st.q = cert.q_n;
    detail::orbit_flags(cert, st);
    cert.provenance = CertProvenance::supplied;
    return cert;
}

inline GeometryReport geometry_report(const ConstructionState& state, int n, int K,
                                      const AlphaRepr& alpha) {
    GeometryReport rep;
    rep.n = n;
    const ScheduleStage& s = state.stage(n);
    long long q = s.q_ll();
    double qi = 1.0 / static_cast<double>(q);
    BigRat radius = BigRat(1) / BigRat(pow_int(BigInt(q), n + 2));
    MapPtr hn = state.h[static_cast<size_t>(n - 1)];
    TruncatedLimit Hn = truncate_limit(state, n, K);

    std::vector<BigRat> cp(static_cast<size_t>(q)), dp(static_cast<size_t>(q));
    std::vector<BigRat> hcp(static_cast<size_t>(q)), hdp(static_cast<size_t>(q));
    std::vector<BigRat> cpp(static_cast<size_t>(q)), dpp(static_cast<size_t>(q));
    for (long long i = 0; i < q; ++i) {
        BigRat fiber(i, q);
        cp[static_cast<size_t>(i)] = mod1(fiber - radius);
        dp[static_cast<size_t>(i)] = mod1(fiber + radius);
        hcp[static_cast<size_t>(i)] =
            expr::evaluate_inverse_rat(hn, cp[static_cast<size_t>(i)]);
        hdp[static_cast<size_t>(i)] =
            expr::evaluate_inverse_rat(hn, dp[static_cast<size_t>(i)]);
        cpp[static_cast<size_t>(i)] =
            expr::evaluate_inverse_rat(Hn.map, cp[static_cast<size_t>(i)]);
        dpp[static_cast<size_t>(i)] =
            expr::evaluate_inverse_rat(Hn.map, dp[static_cast<size_t>(i)]);
    }
    auto rgap = [](const BigRat& a, const BigRat& b) { return rat_to_double(mod1(b - a)); };
    auto rdist = [&](const BigRat& a, const BigRat& b) {
        double g = rgap(a, b);
        return std::min(g, 1.0 - g);
    };

    auto add = [&](const std::string& name, double lhs, double rhs, bool le) {
        rep.records.push_back({name, lhs, rhs, le ? lhs <= rhs : lhs < rhs});
    };

    double e41_max = 0.0, e41_min = 1.0;
    for (long long i = 0; i < q; ++i) {
        double g = rgap(hdp[static_cast<size_t>(i)],
                        hcp[static_cast<size_t>((i + 1) % q)]);
        e41_max = std::max(e41_max, g);
        e41_min = std::min(e41_min, g);
    }
    add("e41_upper", e41_max, std::ldexp(1.0, -(n + 3)) * qi, false);
    add("e41_positive", 0.0, e41_min, false);

    double ee_max = 0.0, eee_max = 0.0;
    for (long long i = 0; i < q; ++i) {
        ee_max = std::max(ee_max, rdist(cpp[static_cast<size_t>(i)],
                                        hcp[static_cast<size_t>(i)]));
        eee_max = std::max(eee_max, rdist(dpp[static_cast<size_t>(i)],
                                          hdp[static_cast<size_t>(i)]));
    }
    add("ee", ee_max, std::ldexp(1.0, -(n + 5)) * qi, true);
    add("eee", eee_max, std::ldexp(1.0, -(n + 5)) * qi, true);

    double eeee_max = 0.0, eeee_min = 1.0, eeeee_min = 1.0;
    for (long long i = 0; i < q; ++i) {
        double g = rgap(dpp[static_cast<size_t>(i)],
                        cpp[static_cast<size_t>((i + 1) % q)]);
        eeee_max = std::max(eeee_max, g);
        eeee_min = std::min(eeee_min, g);
        eeeee_min = std::min(eeeee_min,
                             rgap(cpp[static_cast<size_t>(i)],
                                  dpp[static_cast<size_t>(i)]));
    }
    add("eeee_upper", eeee_max, std::ldexp(1.0, -(n + 2)) * qi, false);
    add("eeee_positive", 0.0, eeee_min, false);
    add("eeeee", 0.5 * qi, eeeee_min, false);

    // (e43)-(e45) compare through H_{n-1}
    double L = s.L_prev;
    MapPtr Hprev = expr::identity();
    if (n >= 2) {
        std::vector<MapPtr> parts(state.h.begin(), state.h.begin() + (n - 1));
        Hprev = expr::compose(parts);
    }
    double len_max = 0.0, gap_min = 1.0, gap_p_min = 1.0;
    for (long long i = 0; i < q; ++i) {
        BigRat ci = expr::evaluate_rat(Hprev, cp[static_cast<size_t>(i)]);
        BigRat di = expr::evaluate_rat(Hprev, dp[static_cast<size_t>(i)]);
        BigRat cn = expr::evaluate_rat(Hprev, cp[static_cast<size_t>((i + 1) % q)]);
        len_max = std::max(len_max, rgap(ci, di));
        gap_min = std::min(gap_min, rgap(di, cn));
        gap_p_min = std::min(gap_p_min, rgap(dp[static_cast<size_t>(i)],
                                             cp[static_cast<size_t>((i + 1) % q)]));
    }
    add("e43", len_max, L * 2.0 * rat_to_double(radius) * (1.0 + 1e-9), true);
    add("e44", gap_p_min / L * (1.0 - 1e-9), gap_min, true);
    add("e45", 4.0 * n * L * L, std::pow(static_cast<double>(q), n + 1), true);
    (void)alpha;
    return rep;
}

// Transport the certificate by h and re-check against h f h^{-1}.
// Returns the re-checked certificate; compare flags with the input to see
// which survived (order conditions (a),(d),(e) must).
inline BnCertificate conjugation_invariance_probe(const MapPtr& h, const MapPtr& f,
                                                  const BnCertificate& cert,
                                                  long long k_budget = 2'000'000) {
    BnCertificate moved = cert;
    for (auto& x : moved.c) x = expr::evaluate(h, x);
    for (auto& x : moved.d) x = expr::evaluate(h, x);
    MapPtr conj = expr::compose({h, f, expr::inverse(h)});
    return check_certificate(conj, moved, k_budget);
}

// -- lemma oracles ---------------------------------------------------------

struct LemmaRecord {
    std::string lemma;
    int r = 1;
    int samples = 0;
    double max_ratio = 0.0;
    int violations = 0;
};

struct LemmaReport {
    std::vector<LemmaRecord> records;
    int total_violations() const {
        int v = 0;
        for (const auto& r : records) v += r.violations;
        return v;
    }
};

inline LemmaReport lemma_oracles(const LemmaConstants& consts, int r_max, int samples,
                                 uint64_t seed) {
    if (samples < 100) throw OutOfRange("lemma_oracles: samples >= 100 required");
    detail::Rng rng(seed);
    LemmaReport rep;
    const int grid = 1 << 10;
    for (int r = 1; r <= r_max; ++r) {
        LemmaRecord l1{"2.1", r, 0, 0.0, 0};
        LemmaRecord l2{"2.2", r, 0, 0.0, 0};
        LemmaRecord l3{"2.3", r, 0, 0.0, 0};
        LemmaRecord l4{"2.4", r, 0, 0.0, 0};
        for (int i = 0; i < samples; ++i) {
            {
                MapPtr fm = detail::random_map(rng, 1);
                MapPtr gm = detail::random_map(rng, 1);
                double lhs = cr_norm(expr::compose(fm, gm), r, grid);
                double rhs = consts.C1(r) * std::pow(cr_norm(fm, r, grid), r) *
                             std::pow(cr_norm(gm, r, grid), r);
                l1.samples++;
                l1.max_ratio = std::max(l1.max_ratio, lhs / rhs);
                if (lhs > rhs) l1.violations++;
            }
            {
                MapPtr H = detail::random_map(rng, 1);
                double a = rng.uniform(0.0, 1.0);
                double b = a + rng.uniform(1e-6, 1e-3);
                double lhs = dr_distance(
                    detail::conjugate_rotation_expr(H, rat_from_double(a)),
                    detail::conjugate_rotation_expr(H, rat_from_double(b)), r, grid);
                double rhs = consts.C2(r) *
                             std::pow(cr_norm(H, r + 1, grid), r + 1) * (b - a);
                l2.samples++;
                l2.max_ratio = std::max(l2.max_ratio, lhs / rhs);
                if (lhs > rhs) l2.violations++;
            }
            {
                int q = rng.uniform_int(2, 32);
                MapPtr k = expr::moebius(MoebiusMap::from_a(rng.uniform(0.5, 0.999)));
                MapPtr h = expr::lift(k, q);
                double lhs = cr_norm(h, r, grid);
                double rhs = cr_norm(k, r, grid) *
                             std::pow(static_cast<double>(q), r - 1);
                l3.samples++;
                l3.max_ratio = std::max(l3.max_ratio, lhs / rhs);
                if (lhs > rhs * (1.0 + 1e-9)) l3.violations++;
            }
            {
                MoebiusMap k = MoebiusMap::from_a(rng.uniform(0.5, 0.999));
                double lhs = cr_norm(expr::moebius(k), r, grid);
                double rhs = consts.C3(r) * std::pow(rho(k), -2.0 * r);
                l4.samples++;
                l4.max_ratio = std::max(l4.max_ratio, lhs / rhs);
                if (lhs > rhs) l4.violations++;
            }
        }
        rep.records.push_back(l1);
        rep.records.push_back(l2);
        rep.records.push_back(l3);
        rep.records.push_back(l4);
    }
    return rep;
}

// -- measure bridge --------------------------------------------------------

inline IntervalFamily certificate_family(const BnCertificate& cert) {
    cert.validate_shape();
    if (cert.flag_a == TriFlag::fail)
        throw MalformedCertificate("certificate_family: cyclic order (a) violated");
    IntervalFamily fam;
    for (long long i = 0; i < cert.q_n; ++i)
        fam.intervals.push_back(
            {cert.c[static_cast<size_t>(i)], cert.d[static_cast<size_t>(i)]});
    return fam;
}

// -- serialization ---------------------------------------------------------

namespace detail {
inline std::string dec17(double x) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}
}  // namespace detail

inline nlohmann::json certificate_to_json(const BnCertificate& cert) {
    nlohmann::json j;
    j["n"] = cert.n;
    j["q_n"] = cert.q_n;
    j["l_n"] = cert.l_n;
    j["m_n"] = cert.m_n;
    j["precision"] = 17;
    j["c"] = nlohmann::json::array();
    for (double x : cert.c) j["c"].push_back(detail::dec17(x));
    j["d"] = nlohmann::json::array();
    for (double x : cert.d) j["d"].push_back(detail::dec17(x));
    j["flags"] = {{"a", tri_flag_name(cert.flag_a)}, {"b", tri_flag_name(cert.flag_b)},
                  {"c", tri_flag_name(cert.flag_c)}, {"d", tri_flag_name(cert.flag_d)},
                  {"e", tri_flag_name(cert.flag_e)}};
    j["margins"] = {{"a", cert.margin_a}, {"b", cert.margin_b}, {"c", cert.margin_c},
                    {"d", cert.margin_d}, {"e", cert.margin_e}};
    j["provenance"] =
        (cert.provenance == CertProvenance::constructed) ? "constructed" : "supplied";
    return j;
}

inline BnCertificate certificate_from_json(const nlohmann::json& j) {
    BnCertificate cert;
    cert.n = j.at("n").get<int>();
    cert.q_n = j.at("q_n").get<long long>();
    cert.l_n = j.at("l_n").get<long long>();
    cert.m_n = j.at("m_n").get<long long>();
    for (const auto& s : j.at("c")) cert.c.push_back(std::stod(s.get<std::string>()));
    for (const auto& s : j.at("d")) cert.d.push_back(std::stod(s.get<std::string>()));
    const auto& fl = j.at("flags");
    cert.flag_a = tri_flag_from(fl.at("a").get<std::string>());
    cert.flag_b = tri_flag_from(fl.at("b").get<std::string>());
    cert.flag_c = tri_flag_from(fl.at("c").get<std::string>());
    cert.flag_d = tri_flag_from(fl.at("d").get<std::string>());
    cert.flag_e = tri_flag_from(fl.at("e").get<std::string>());
    const auto& mg = j.at("margins");
    cert.margin_a = mg.at("a").get<double>();
    cert.margin_b = mg.at("b").get<double>();
    cert.margin_c = mg.at("c").get<double>();
    cert.margin_d = mg.at("d").get<double>();
    cert.margin_e = mg.at("e").get<double>();
    cert.provenance = (j.at("provenance").get<std::string>() == "constructed")
                          ? CertProvenance::constructed
                          : CertProvenance::supplied;
    cert.validate_shape();
    return cert;
}

inline nlohmann::json geometry_to_json(const GeometryReport& rep) {
    nlohmann::json j;
    j["n"] = rep.n;
    j["records"] = nlohmann::json::array();
    for (const auto& r : rep.records)
        j["records"].push_back(
            {{"name", r.name}, {"lhs", r.lhs}, {"rhs", r.rhs}, {"pass", r.pass}});
    j["all_pass"] = rep.all_pass();
    return j;
}

inline nlohmann::json lemma_report_to_json(const LemmaReport& rep) {
    nlohmann::json j;
    j["records"] = nlohmann::json::array();
    for (const auto& r : rep.records)
        j["records"].push_back({{"lemma", r.lemma},
                                {"r", r.r},
                                {"samples", r.samples},
                                {"max_ratio", r.max_ratio},
                                {"violations", r.violations}});
    j["total_violations"] = rep.total_violations();
    return j;
}

}  // namespace akc
