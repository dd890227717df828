#pragma once

#include <algorithm>
#include <functional>
#include <string>
#include <vector>

#include "akc/rational.hpp"

namespace akc {

enum class ApproachSide { lower, upper, mixed };

// An irrational (or exactly known rational) number presented through a
// stateless convergent generator with certified error bounds. Index starts
// at 1. error_bound(m) is a strict upper bound on |alpha - convergent(m)|
// and must decrease to zero; for side == lower the convergents increase
// strictly toward alpha.
struct AlphaRepr {
    std::function<BigRat(int)> convergent;
    std::function<BigRat(int)> error_bound;
    ApproachSide side = ApproachSide::mixed;
    bool exact = false;  // convergent(m) == alpha for all m, error 0
    int max_index = 16;  // generator depth budget
    std::string describe;

    // Enclosure of alpha from the generator at index m.
    IntervalBound enclosure(int m) const {
        BigRat c = convergent(m), e = error_bound(m);
        switch (side) {
            case ApproachSide::lower: return {c, c + e};
            case ApproachSide::upper: return {c - e, c};
            default: return {c - e, c + e};
        }
    }
};

// alpha = sum_{k>=1} base^(-k!), a lower Liouville number.
// convergent(m) = sum_{k<=m} base^(-k!), denominator base^(m!),
// error_bound(m) = 2 * base^(-(m+1)!).
inline AlphaRepr liouville_series(int base, int max_index = 8) {
    if (base < 2) throw OutOfRange("liouville_series: base >= 2 required");
    if (max_index < 1) throw OutOfRange("liouville_series: max_index >= 1 required");
    AlphaRepr a;
    a.side = ApproachSide::lower;
    a.max_index = max_index;
    a.describe = "factorial_series base " + std::to_string(base);
    BigInt b(base);
    a.convergent = [b](int m) {
        if (m < 1) throw OutOfRange("convergent index >= 1 required");
        BigInt fact(1);
        BigRat sum(0);
        for (int k = 1; k <= m; ++k) {
            fact *= k;
            // fact can only be materialized as an exponent while it fits.
            if (fact > 2'000'000)
                throw DepthExhausted("liouville_series: factorial exponent too large", m);
            sum += BigRat(BigInt(1), pow_int(b, fact.convert_to<long long>()));
        }
        return sum;
    };
    a.error_bound = [b](int m) {
        if (m < 1) throw OutOfRange("convergent index >= 1 required");
        BigInt fact(1);
        for (int k = 1; k <= m + 1; ++k) {
            fact *= k;
            if (fact > 2'000'000)
                throw DepthExhausted("liouville_series: factorial exponent too large", m);
        }
        return BigRat(BigInt(2), pow_int(b, fact.convert_to<long long>()));
    };
    return a;
}

// alpha known exactly as a rational, treated as the limit of itself from
// below: the generator walks the continued-fraction convergents lying
// strictly below the value and ends on the value itself (error 0).
inline AlphaRepr exact_rational_alpha(const BigRat& value) {
    std::vector<BigRat> lows;
    {
        BigInt n = num(value), d = den(value);
        BigInt h0(0), k0(1), h1(1), k1(0);  // h_{-2}/k_{-2}, h_{-1}/k_{-1}
        while (d != 0) {
            BigInt a = n / d, rem = n % d;
            if (rem < 0) {
                a -= 1;
                rem += d;
            }
            BigInt h2 = a * h1 + h0, k2 = a * k1 + k0;
            BigRat c(h2, k2);
            if (c < value) lows.push_back(c);
            h0 = h1;
            k0 = k1;
            h1 = h2;
            k1 = k2;
            n = d;
            d = rem;
        }
    }
    lows.push_back(value);
    AlphaRepr a;
    a.side = ApproachSide::lower;
    a.exact = true;
    a.max_index = static_cast<int>(lows.size());
    a.describe = "exact " + rat_to_string(value);
    a.convergent = [lows](int m) {
        if (m < 1) throw OutOfRange("convergent index >= 1 required");
        size_t i = std::min<size_t>(static_cast<size_t>(m), lows.size()) - 1;
        return lows[i];
    };
    a.error_bound = [value, lows](int m) {
        if (m < 1) throw OutOfRange("convergent index >= 1 required");
        size_t i = std::min<size_t>(static_cast<size_t>(m), lows.size()) - 1;
        return value - lows[i];
    };
    return a;
}

// x -> -x reduces the upper case to the lower one.
inline AlphaRepr reflected(const AlphaRepr& src) {
    AlphaRepr a = src;
    a.side = src.side == ApproachSide::lower   ? ApproachSide::upper
             : src.side == ApproachSide::upper ? ApproachSide::lower
                                               : ApproachSide::mixed;
    auto conv = src.convergent;
    a.convergent = [conv](int m) { return -conv(m); };
    a.describe = "reflected " + src.describe;
    return a;
}

// Certified lower bound on alpha - pq (may be nonpositive if pq >= alpha is
// certain), and upper bound, from generator depth m.
inline IntervalBound diff_enclosure(const AlphaRepr& alpha, const BigRat& pq, int m) {
    IntervalBound e = alpha.enclosure(m);
    return {e.lo - pq, e.hi - pq};
}

// Decides: pq < alpha and alpha - pq < delta / q^N, using certified bounds
// only. Throws IndeterminatePrecision when the generator cannot separate.
inline bool is_lower_approximation(const AlphaRepr& alpha, const BigRat& pq, long long N,
                                   const BigRat& delta) {
    if (N < 0) throw OutOfRange("is_lower_approximation: N >= 0 required");
    if (delta <= 0) throw OutOfRange("is_lower_approximation: delta > 0 required");
    BigInt q = den(pq);
    for (int m = 1; m <= alpha.max_index; ++m) {
        IntervalBound d = diff_enclosure(alpha, pq, m);
        if (d.hi <= 0) return false;  // pq >= alpha certified
        if (d.lo > 0) {
            // side decided; compare alpha - pq against delta / q^N
            if (cmp_scaled(d.hi, q, N, delta) < 0) return true;
            if (cmp_scaled(d.lo, q, N, delta) >= 0) return false;
        }
        // otherwise the enclosure straddles zero or the comparison is
        // undecided at this depth: deepen
    }
    throw IndeterminatePrecision(
        "is_lower_approximation: generator depth cannot separate the inequality");
}

// First convergent p/q with q > q_min qualifying under (N, delta).
inline BigRat find_lower_convergent(const AlphaRepr& alpha, long long N, const BigRat& delta,
                                    const BigInt& q_min) {
    if (alpha.side != ApproachSide::lower)
        throw MalformedInput("find_lower_convergent: lower-side representation required");
    if (N < 0 || delta <= 0 || q_min < 1)
        throw OutOfRange("find_lower_convergent: N >= 0, delta > 0, q_min >= 1 required");
    for (int m = 1; m <= alpha.max_index; ++m) {
        BigRat c = alpha.convergent(m);
        if (den(c) <= q_min) continue;
        if (alpha.error_bound(m) == 0) continue;  // c == alpha: not strictly lower
        if (is_lower_approximation(alpha, c, N, delta)) return c;
    }
    throw DepthExhausted("find_lower_convergent: no qualifying convergent within max index",
                         alpha.max_index);
}

// Euclidean continued fraction coefficients of x, at most `depth` terms.
inline std::vector<BigInt> continued_fraction_expand(const BigRat& x, int depth) {
    if (depth < 1) throw OutOfRange("continued_fraction_expand: depth >= 1 required");
    std::vector<BigInt> out;
    BigRat r = x;
    for (int i = 0; i < depth; ++i) {
        BigInt a = floor_rat(r);
        out.push_back(a);
        BigRat frac = r - BigRat(a);
        if (frac == 0) break;
        r = 1 / frac;
    }
    return out;
}

// Certified enclosure of q*alpha - p for pq = p/q, of width at most
// max_width (deepening the generator as needed).
inline IntervalBound theta_enclosure(const AlphaRepr& alpha, const BigRat& pq,
                                     const BigRat& max_width = BigRat(1, 1000000)) {
    BigInt p = num(pq), q = den(pq);
    for (int m = 1; m <= alpha.max_index; ++m) {
        IntervalBound e = alpha.enclosure(m);
        BigRat lo = BigRat(q) * e.lo - BigRat(p);
        BigRat hi = BigRat(q) * e.hi - BigRat(p);
        // keep deepening while the sign of theta is still undecided
        if (hi - lo <= max_width && !(lo <= 0 && hi > 0)) return {lo, hi};
    }
    throw IndeterminatePrecision("theta_enclosure: cannot reach requested width");
}

}  // namespace akc
