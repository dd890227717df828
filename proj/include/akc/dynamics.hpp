#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <optional>
#include <vector>

#include "akc/alpha.hpp"
#include "akc/circle.hpp"
#include "akc/expr.hpp"
#include "akc/rational.hpp"

namespace akc {

struct OrbitSample {
    double start = 0.0;
    std::vector<double> points;  // points[k] = f^{k+1}(start)
    double lift_track = 0.0;     // cumulative principal lift displacement
};

inline OrbitSample orbit(const MapPtr& f, double x0, int steps) {
    if (steps < 1) throw OutOfRange("orbit: steps >= 1 required");
    OrbitSample o;
    o.start = wrap01(x0);
    o.points.reserve(static_cast<size_t>(steps));
    double x = o.start;
    for (int k = 0; k < steps; ++k) {
        double fx = expr::evaluate(f, x);
        o.lift_track += signed_disp(x, fx);
        x = fx;
        o.points.push_back(x);
    }
    return o;
}

struct RotationNumberEstimate {
    double value = 0.0;        // in [0, 1)
    double error_bound = 0.0;  // two-sided
    std::optional<BigRat> exact;  // set when a periodic orbit was detected
};

// Lift-average estimator with periodic-orbit detection. A returning orbit of
// period k realizes rotation number p/k where p is read off the cyclic order
// of the orbit points: f sends the i-th point (in circle order) to the
// (i+p)-th. Summed principal displacements are not reliable here -- a heavily
// distorted conjugate can move a point more than half way around in one step.
inline RotationNumberEstimate rotation_number(const MapPtr& f, int max_iter = 4096,
                                              double tol = 1e-9) {
    if (max_iter < 10) throw OutOfRange("rotation_number: max_iter >= 10 required");
    double x0 = 0.1234567890123;  // arbitrary generic start
    std::vector<double> orbit{x0};
    double x = x0, lift = 0.0;
    int calm = 0;  // consecutive near-stationary steps
    for (int k = 1; k <= max_iter; ++k) {
        double fx = expr::evaluate(f, x);
        double d = signed_disp(x, fx);
        lift += d;
        x = fx;
        if (cyc_dist(x, x0) < tol) {
            int n = k;
            std::vector<int> idx(static_cast<size_t>(n));
            std::iota(idx.begin(), idx.end(), 0);
            std::sort(idx.begin(), idx.end(),
                      [&](int a, int b) { return orbit[static_cast<size_t>(a)] <
                                                 orbit[static_cast<size_t>(b)]; });
            std::vector<int> rank(static_cast<size_t>(n));
            for (int i = 0; i < n; ++i) rank[static_cast<size_t>(idx[static_cast<size_t>(i)])] = i;
            int p = n == 1 ? 0 : (rank[1] - rank[0] + n) % n;
            BigRat rn = mod1(BigRat(p, n));
            return {rat_to_double(rn), 0.0, rn};
        }
        // a genuinely trapped orbit keeps making vanishing steps; a lingering
        // periodic orbit escapes the slow region again
        calm = (std::fabs(d) < tol * 1e-3) ? calm + 1 : 0;
        if (calm >= 64) return {0.0, 0.0, BigRat(0)};
        orbit.push_back(x);
    }
    double v = lift / max_iter;
    return {wrap01(v), 1.0 / max_iter, std::nullopt};
}

enum class CountMethod { closed_form, brute_force };

struct ReturnExitCounts {
    long long m = 0;  // largest k with the orbit staying in the open interval
    long long l = 1;  // smallest k >= 1 leaving the closed gap
    CountMethod method = CountMethod::closed_form;
};

namespace detail {
// ceil of a positive rational
inline BigInt ceil_rat(const BigRat& r) {
    BigInt f = floor_rat(r);
    return (BigRat(f) == r) ? f : f + 1;
}
}  // namespace detail

// m = largest k with k*theta < interval_length (strict). Requires the two
// enclosure ends to agree, otherwise the enclosure is too wide to decide.
inline long long return_count(const IntervalBound& theta, const BigRat& interval_length) {
    if (theta.lo <= 0) throw OutOfRange("return_count: theta.lo > 0 required");
    if (interval_length <= 0) throw OutOfRange("return_count: interval_length > 0 required");
    BigInt at_hi = detail::ceil_rat(interval_length / theta.hi) - 1;
    BigInt at_lo = detail::ceil_rat(interval_length / theta.lo) - 1;
    if (at_hi != at_lo)
        throw EnclosureTooWide("return_count: floor differs across theta enclosure");
    return at_hi.convert_to<long long>();
}

inline long long return_count(const IntervalBound& theta, double interval_length) {
    return return_count(theta, rat_from_double(interval_length));
}

// l = smallest k >= 1 with k*theta > gap_length.
inline long long exit_count(const IntervalBound& theta, const BigRat& gap_length) {
    if (theta.lo <= 0) throw OutOfRange("exit_count: theta.lo > 0 required");
    if (gap_length <= 0) throw OutOfRange("exit_count: gap_length > 0 required");
    BigInt at_hi = floor_rat(gap_length / theta.hi) + 1;
    BigInt at_lo = floor_rat(gap_length / theta.lo) + 1;
    if (at_hi != at_lo)
        throw EnclosureTooWide("exit_count: floor differs across theta enclosure");
    return at_hi.convert_to<long long>();
}

inline long long exit_count(const IntervalBound& theta, double gap_length) {
    return exit_count(theta, rat_from_double(gap_length));
}

// Empirical counts from orbit iteration of g = expr^q. Conventions follow
// the open/closed memberships of the defining conditions verbatim: the
// return interval is open (c, d), the exit gap is closed [d, c_next];
// exact boundary landings count as outside / inside respectively.
inline ReturnExitCounts brute_force_counts(const MapPtr& f, int q, double c, double d,
                                           double c_next, long long k_max) {
    if (k_max < 1) throw OutOfRange("brute_force_counts: k_max >= 1 required");
    if (!cyclic_ordered(c, d, c_next))
        throw MalformedInput("brute_force_counts: expected cyclic order c < d < c_next");
    auto step_q = [&](double x) {
        for (int i = 0; i < q; ++i) x = expr::evaluate(f, x);
        return x;
    };
    CircleInterval ret{c, d};
    CircleInterval gap{d, c_next};
    ReturnExitCounts out;
    out.method = CountMethod::brute_force;
    bool m_done = false;
    double x = wrap01(c);
    for (long long k = 1; k <= k_max; ++k) {
        x = step_q(x);
        if (ret.contains_open(x)) {
            out.m = k;
        } else {
            m_done = true;
            break;
        }
    }
    if (!m_done) throw BudgetExceeded("brute_force_counts: orbit never left (c,d)");
    bool l_done = false;
    x = wrap01(d);
    for (long long k = 1; k <= k_max; ++k) {
        x = step_q(x);
        if (!gap.contains(x)) {
            out.l = k;
            l_done = true;
            break;
        }
    }
    if (!l_done) throw BudgetExceeded("brute_force_counts: orbit never left [d, c_next]");
    return out;
}

// Fast-forward iteration for structural conjugates f = H R_alpha H^{-1}:
// f^k(x) = H(R_{k alpha}(H^{-1} x)) with the rotation angle reduced in
// exact arithmetic, so no error accumulates over k.
struct ConjugateRotation {
    MapPtr H;
    BigRat alpha;

    double power_apply(long long k, double x) const {
        BigRat ang = mod1(BigRat(k) * alpha);
        BigRat u = expr::evaluate_inverse_rat(H, rat_from_double(wrap01(x)));
        return rat_to_double(expr::evaluate_rat(H, mod1(u + ang)));
    }
};

}  // namespace akc
