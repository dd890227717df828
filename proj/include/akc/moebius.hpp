#pragma once

#include <boost/multiprecision/cpp_bin_float.hpp>
#include <cmath>

#include "akc/circle.hpp"
#include "akc/errors.hpp"
#include "akc/jet.hpp"
#include "akc/rational.hpp"

namespace akc {

// The Moebius circle map coming from k_a(z) = (z+a)/(az+1), 1/2 <= a < 1,
// in the identification z = e^{2 pi i x}. Internally parameterized by
//     t = (1-a)/(1+a) = tan^2(pi * rho(a))  in (0, 1/3],
// which stays representable when a is closer to 1 than one double ulp
// (deep construction stages need exactly that regime). The map fixes
// x = 0 (attractor, derivative t') and x = 1/2 (repellor, derivative 1/t).
//
// Closed forms used throughout:
//     khat(x)   = (1/pi) * atan2(t sin(pi x), cos(pi x))        (mod 1)
//     khat'(x)  = t / (cos^2(pi x) + t^2 sin^2(pi x))
//     rho       = arccos(a)/(2 pi),  a = (1-t)/(1+t)
struct MoebiusMap {
    double t;

    static constexpr double kMinA = 0.5;

    static MoebiusMap from_a(double a) {
        if (!(a >= kMinA && a < 1.0))
            throw OutOfRange("MoebiusMap: a in [1/2, 1) required");
        return MoebiusMap{(1.0 - a) / (1.0 + a)};
    }
    static MoebiusMap from_t(double t) {
        if (!(t > 0.0 && t <= 1.0 / 3.0))
            throw OutOfRange("MoebiusMap: t in (0, 1/3] required");
        return MoebiusMap{t};
    }
    double a() const { return (1.0 - t) / (1.0 + t); }
};

namespace detail {
// sin(pi x), cos(pi x) evaluated so that accuracy is absolute ~1e-16 near
// the repellor x = 1/2, where cos(pi x) suffers cancellation.
inline double cos_pi(double x) {
    return std::sin(M_PI * (0.5 - x));
}
inline double sin_pi(double x) { return std::sin(M_PI * x); }
}  // namespace detail

inline double moebius_apply(const MoebiusMap& k, double x) {
    double xm = wrap01(x);
    double v = std::atan2(k.t * detail::sin_pi(xm), detail::cos_pi(xm)) / M_PI;
    return wrap01(v);
}

inline double moebius_apply_inverse(const MoebiusMap& k, double x) {
    double xm = wrap01(x);
    double v = std::atan2(detail::sin_pi(xm), k.t * detail::cos_pi(xm)) / M_PI;
    return wrap01(v);
}

namespace detail {
// Deep stages have t far below the relative resolution of double near the
// map's output, so the rational evaluation path goes through a wide float.
using BigFloat = boost::multiprecision::cpp_bin_float_100;

inline const BigFloat& pi_mp() {
    static const BigFloat pi = 4 * atan(BigFloat(1));
    return pi;
}

inline BigRat rat_from_mp(const BigFloat& v) { return v.convert_to<BigRat>(); }

inline BigRat moebius_mp(double t_num, double t_den, const BigRat& x) {
    BigRat xm = mod1(x);
    const BigFloat& pi = pi_mp();
    BigFloat s = sin(pi * xm.convert_to<BigFloat>());
    // cos(pi x) as sin(pi(1/2 - x)) with the subtraction done exactly
    BigFloat c = sin(pi * (BigRat(1, 2) - xm).convert_to<BigFloat>());
    BigFloat v = atan2(BigFloat(t_num) * s, BigFloat(t_den) * c) / pi;
    return mod1(rat_from_mp(v));
}
}  // namespace detail

inline BigRat moebius_apply_rat(const MoebiusMap& k, const BigRat& x) {
    return detail::moebius_mp(k.t, 1.0, x);
}

inline BigRat moebius_apply_inverse_rat(const MoebiusMap& k, const BigRat& x) {
    return detail::moebius_mp(1.0, k.t, x);
}

inline double moebius_derivative(const MoebiusMap& k, double x) {
    double c = detail::cos_pi(x), s = detail::sin_pi(x);
    return k.t / (c * c + k.t * k.t * s * s);
}

inline double moebius_inverse_derivative(const MoebiusMap& k, double x) {
    double c = detail::cos_pi(x), s = detail::sin_pi(x);
    double u = 1.0 / k.t;
    return u / (c * c + u * u * s * s);
}

namespace detail {
// Jet of khat (or its inverse for t -> 1/t) at x: the i-th derivative of
// the map is the (i-1)-th derivative of D(x) = t/(cos^2 + t^2 sin^2),
// evaluated by series arithmetic on the trig jets.
inline Jet moebius_jet_impl(double t, double value, double x, int r) {
    Jet out(r);
    out.d[0] = value;
    if (r == 0) return out;
    int n = r;  // need D to order r-1; series of length r
    series::Poly c(static_cast<size_t>(n), 0.0), s(static_cast<size_t>(n), 0.0);
    // Taylor coefficients of cos(pi(x+u)), sin(pi(x+u)) in u
    double cv = cos_pi(x), sv = sin_pi(x);
    double p = 1.0, fact = 1.0;
    for (int k = 0; k < n; ++k) {
        if (k > 0) {
            p *= M_PI;
            fact *= k;
        }
        double cd, sd;  // k-th derivative pattern: cos -> -s, -c, s, c ...
        switch (k % 4) {
            case 0: cd = cv; sd = sv; break;
            case 1: cd = -sv; sd = cv; break;
            case 2: cd = -cv; sd = -sv; break;
            default: cd = sv; sd = -cv; break;
        }
        c[static_cast<size_t>(k)] = cd * p / fact;
        s[static_cast<size_t>(k)] = sd * p / fact;
    }
    series::Poly den = series::mul(c, c);
    series::Poly s2 = series::mul(s, s);
    for (size_t k = 0; k < den.size(); ++k) den[k] += t * t * s2[k];
    series::Poly numer(static_cast<size_t>(n), 0.0);
    numer[0] = t;
    series::Poly D = series::div(numer, den);
    // derivative i of the map = derivative (i-1) of D = D[i-1] * (i-1)!
    double f = 1.0;
    for (int i = 1; i <= r; ++i) {
        if (i >= 2) f *= (i - 1);
        out.d[static_cast<size_t>(i)] = D[static_cast<size_t>(i - 1)] * f;
    }
    return out;
}
}  // namespace detail

inline Jet moebius_jet(const MoebiusMap& k, double x, int r) {
    return detail::moebius_jet_impl(k.t, moebius_apply(k, x), wrap01(x), r);
}

inline Jet moebius_inverse_jet(const MoebiusMap& k, double x, int r) {
    return detail::moebius_jet_impl(1.0 / k.t, moebius_apply_inverse(k, x), wrap01(x), r);
}

// Radius of the expanding interval I(khat_a) = {x : khat'(x) >= 1}.
inline double rho(const MoebiusMap& k) {
    // rho = arccos(a)/(2 pi) = atan(sqrt(t))/pi, stable down to tiny t
    return std::atan(std::sqrt(k.t)) / M_PI;
}

inline double rho_of_a(double a) { return rho(MoebiusMap::from_a(a)); }

// The closed arc {x : cos(2 pi x) <= -a}, centered at 1/2.
inline CircleInterval expanding_interval(const MoebiusMap& k) {
    double r = rho(k);
    return CircleInterval{wrap01(0.5 - r), wrap01(0.5 + r)};
}

// I(khat^{-1}): the same-length arc centered at the attractor x = 0.
inline CircleInterval contracting_interval(const MoebiusMap& k) {
    double r = rho(k);
    return CircleInterval{wrap01(-r), wrap01(r)};
}

// Inverse of rho: the map with rho(khat_a) = target. t = tan^2(pi target),
// exact for targets far below double-ulp distance of a from 1.
inline MoebiusMap solve_a_for_rho(double target) {
    if (!(target > 0.0 && target <= 1.0 / 6.0))
        throw OutOfRange("solve_a_for_rho: target in (0, 1/6] required");
    double tn = std::tan(M_PI * target);
    return MoebiusMap{tn * tn};
}

}  // namespace akc
