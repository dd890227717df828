#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <cmath>
#include <cstdint>
#include <string>
#include <utility>

#include "akc/errors.hpp"

namespace akc {

using BigInt = boost::multiprecision::cpp_int;
using BigRat = boost::multiprecision::cpp_rational;

inline BigInt num(const BigRat& r) { return boost::multiprecision::numerator(r); }
inline BigInt den(const BigRat& r) { return boost::multiprecision::denominator(r); }

inline BigInt floor_div(const BigInt& a, const BigInt& b) {
    BigInt q = a / b, r = a % b;
    if (r != 0 && ((r < 0) != (b < 0))) --q;
    return q;
}

inline BigInt floor_rat(const BigRat& r) { return floor_div(num(r), den(r)); }

// r reduced to [0, 1)
inline BigRat mod1(const BigRat& r) { return r - BigRat(floor_rat(r)); }

inline BigRat pow_rat(const BigRat& base, long long e) {
    if (e < 0) {
        if (base == 0) throw OutOfRange("pow_rat: 0 to negative power");
        return 1 / pow_rat(base, -e);
    }
    BigRat acc(1), b = base;
    long long n = e;
    while (n > 0) {
        if (n & 1) acc *= b;
        b *= b;
        n >>= 1;
    }
    return acc;
}

inline BigInt pow_int(const BigInt& base, long long e) {
    BigInt acc(1), b = base;
    long long n = e;
    while (n > 0) {
        if (n & 1) acc *= b;
        b *= b;
        n >>= 1;
    }
    return acc;
}

// Exact conversion: every finite double is a dyadic rational.
inline BigRat rat_from_double(double x) {
    if (x == 0.0) return BigRat(0);
    int exp = 0;
    double m = std::frexp(x, &exp);  // x = m * 2^exp, |m| in [1/2, 1)
    long long mant = static_cast<long long>(std::ldexp(m, 53));
    exp -= 53;
    BigRat r(mant);
    if (exp >= 0)
        r *= BigRat(pow_int(BigInt(2), exp));
    else
        r /= BigRat(pow_int(BigInt(2), -exp));
    return r;
}

inline double rat_to_double(const BigRat& r) { return r.convert_to<double>(); }

// "p/q" or "p"
inline std::string rat_to_string(const BigRat& r) {
    if (den(r) == 1) return num(r).str();
    return num(r).str() + "/" + den(r).str();
}

inline BigRat rat_from_string(const std::string& s) {
    auto slash = s.find('/');
    try {
        if (slash == std::string::npos) return BigRat(BigInt(s));
        BigInt p(s.substr(0, slash)), q(s.substr(slash + 1));
        if (q <= 0) throw MalformedInput("rational with nonpositive denominator: " + s);
        return BigRat(p, q);
    } catch (const std::exception& e) {
        throw MalformedInput("cannot parse rational '" + s + "': " + e.what());
    }
}

// Certified enclosure lo <= x <= hi.
struct IntervalBound {
    BigRat lo;
    BigRat hi;

    IntervalBound(BigRat l, BigRat h) : lo(std::move(l)), hi(std::move(h)) {
        if (lo > hi) throw MalformedInput("IntervalBound: lo > hi");
    }
    BigRat width() const { return hi - lo; }
    bool is_point() const { return lo == hi; }
};

// Conservative comparison of a * q^N against b without materializing q^N
// whenever bit-length bounds are conclusive. Returns -1, 0 (exact path
// found equality), or +1 for a*q^N <=> b. q >= 1, N >= 0, a,b > 0.
inline int cmp_scaled(const BigRat& a, const BigInt& q, long long N, const BigRat& b) {
    using boost::multiprecision::msb;
    if (a <= 0 || b <= 0) throw MalformedInput("cmp_scaled: positive operands required");
    if (q < 1) throw MalformedInput("cmp_scaled: q >= 1 required");
    // log2(a * q^N) in [lo_a, hi_a)
    auto log2_bounds = [](const BigRat& r) {
        long long nb = static_cast<long long>(msb(num(r)));
        long long db = static_cast<long long>(msb(den(r)));
        return std::pair<long long, long long>{nb - db - 1, nb - db + 1};
    };
    long long qb = (q == 1) ? 0 : static_cast<long long>(msb(q));
    auto [alo, ahi] = log2_bounds(a);
    auto [blo, bhi] = log2_bounds(b);
    long long lhs_lo = alo + N * qb;
    long long lhs_hi = ahi + N * (qb + 1);
    if (lhs_hi < blo) return -1;
    if (lhs_lo > bhi) return 1;
    // Inconclusive: fall back to exact arithmetic (small operands in practice).
    BigRat lhs = a * BigRat(pow_int(q, N));
    if (lhs < b) return -1;
    if (lhs > b) return 1;
    return 0;
}

}  // namespace akc
