#pragma once

#include <cmath>
#include <cstddef>
#include <vector>

#include "akc/circle.hpp"
#include "akc/errors.hpp"

namespace akc {

// Value and derivatives 1..r of a map at a point. d[0] is the value
// (reduced mod 1 for circle maps), d[i] the i-th derivative.
struct Jet {
    std::vector<double> d;

    Jet() = default;
    explicit Jet(int order) : d(static_cast<size_t>(order) + 1, 0.0) {}

    int order() const { return static_cast<int>(d.size()) - 1; }
    double value() const { return d[0]; }
    double deriv(int i) const { return d[static_cast<size_t>(i)]; }
};

namespace series {

// Truncated Taylor series sum c[k] u^k, k = 0..r. All operations truncate
// at the common order.

using Poly = std::vector<double>;

inline Poly mul(const Poly& a, const Poly& b) {
    size_t r = a.size();
    Poly out(r, 0.0);
    for (size_t i = 0; i < r; ++i) {
        if (a[i] == 0.0) continue;
        for (size_t j = 0; i + j < r; ++j) out[i + j] += a[i] * b[j];
    }
    return out;
}

inline Poly div(const Poly& a, const Poly& b) {
    size_t r = a.size();
    if (b[0] == 0.0) throw Error("series division by series with zero constant term");
    Poly out(r, 0.0);
    for (size_t k = 0; k < r; ++k) {
        double s = a[k];
        for (size_t j = 1; j <= k; ++j) s -= b[j] * out[k - j];
        out[k] = s / b[0];
    }
    return out;
}

// B(A(u)) for series with zero constant terms (a[0] and b[0] ignored;
// result[0] = 0). Faa di Bruno via Horner on series.
inline Poly compose0(const Poly& b, const Poly& a) {
    size_t r = a.size();
    Poly inner = a;
    inner[0] = 0.0;
    Poly acc(r, 0.0);
    for (size_t k = r; k-- > 1;) {
        acc[0] += b[k];
        if (k > 1) acc = mul(acc, inner);
    }
    acc = mul(acc, inner);
    return acc;
}

// Compositional inverse: B with B(A(u)) = u, both with zero constant term.
// Requires a[1] != 0.
inline Poly revert(const Poly& a) {
    size_t r = a.size();
    if (r < 2 || a[1] == 0.0) throw Error("series reversion requires nonzero linear term");
    Poly b(r, 0.0);
    b[1] = 1.0 / a[1];
    Poly apow = a;  // A^j, j starting at 1
    apow[0] = 0.0;
    std::vector<Poly> powers;  // powers[j-1] = A^j
    powers.push_back(apow);
    for (size_t j = 2; j < r; ++j) powers.push_back(mul(powers.back(), powers.front()));
    for (size_t k = 2; k < r; ++k) {
        double s = 0.0;
        for (size_t j = 1; j < k; ++j) s += b[j] * powers[j - 1][k];
        b[k] = -s / powers[k - 1][k];
    }
    return b;
}

}  // namespace series

// Taylor coefficients of the displacement part: c[k] = d[k]/k! for k >= 1,
// c[0] = 0. Used for composition/reversion of circle-map jets.
inline series::Poly jet_to_series(const Jet& j) {
    series::Poly c(j.d.size(), 0.0);
    double fact = 1.0;
    for (size_t k = 1; k < j.d.size(); ++k) {
        fact *= static_cast<double>(k);
        c[k] = j.d[k] / fact;
    }
    return c;
}

inline void series_to_jet(const series::Poly& c, Jet& out) {
    double fact = 1.0;
    for (size_t k = 1; k < c.size(); ++k) {
        fact *= static_cast<double>(k);
        out.d[k] = c[k] * fact;
    }
}

// jet of left∘right given jets of right at x and left at right(x)
inline Jet jet_compose(const Jet& left, const Jet& right) {
    Jet out(right.order());
    out.d[0] = left.d[0];
    if (out.order() >= 1) {
        series::Poly c = series::compose0(jet_to_series(left), jet_to_series(right));
        series_to_jet(c, out);
    }
    return out;
}

// jet of f^{-1} at f(y) given jet of f at y
inline Jet jet_invert(const Jet& f, double preimage) {
    Jet out(f.order());
    out.d[0] = wrap01(preimage);
    if (out.order() >= 1) {
        if (f.order() == 1) {
            out.d[1] = 1.0 / f.d[1];
        } else {
            series_to_jet(series::revert(jet_to_series(f)), out);
        }
    }
    return out;
}

}  // namespace akc
