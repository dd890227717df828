#pragma once

#include <cmath>

#include "akc/errors.hpp"

namespace akc {

// Points of S^1 = R/Z are plain doubles reduced to [0, 1); all comparisons
// go through the cyclic helpers below.
using CirclePoint = double;

inline double wrap01(double x) {
    double y = x - std::floor(x);
    return (y >= 1.0) ? 0.0 : y;  // floor rounding can land exactly on 1
}

// (b - a) mod 1 in [0, 1): counterclockwise arc length from a to b.
inline double cyc_gap(double a, double b) { return wrap01(b - a); }

// Signed displacement in (-1/2, 1/2]: the principal lift of b - a.
inline double signed_disp(double a, double b) {
    double d = wrap01(b - a);
    return (d > 0.5) ? d - 1.0 : d;
}

inline double cyc_dist(double a, double b) { return std::fabs(signed_disp(a, b)); }

// Counterclockwise arc from `left` to `right`.
struct CircleInterval {
    CirclePoint left = 0.0;
    CirclePoint right = 0.0;

    double length() const { return cyc_gap(left, right); }
    // closed-arc membership
    bool contains(double x) const { return cyc_gap(left, x) <= length(); }
    // open-arc membership
    bool contains_open(double x) const {
        double g = cyc_gap(left, x);
        return g > 0.0 && g < length();
    }
};

// a < b < c in cyclic order (strict).
inline bool cyclic_ordered(double a, double b, double c) {
    double ab = cyc_gap(a, b), ac = cyc_gap(a, c);
    return ab > 0.0 && ac > ab;
}

}  // namespace akc
