#pragma once

#include <algorithm>
#include <cmath>

#include "akc/expr.hpp"
#include "akc/jet.hpp"

namespace akc {

// Grid estimates of the C^r quantities
//   ||phi||_r = max_{i<=r} sup |phi^(i)|,
//   |f|_r  = max{||f-id||_r, ||f^{-1}-id||_r, 1},
//   d_r(f,g) = max{||f-g||_r, ||f^{-1}-g^{-1}||_r}.
// All estimates are lower bounds on the true suprema and converge as the
// grid refines. Displacements use the principal lift in (-1/2, 1/2].

// ||f - id||_r sampled on `grid` points; `inverted` sweeps f^{-1}.
inline double cr_norm_minus_id(const MapPtr& f, int r, int grid, bool inverted) {
    double best = 0.0;
    for (int i = 0; i < grid; ++i) {
        double x = static_cast<double>(i) / grid;
        Jet j = inverted ? expr::evaluate_inverse_jet(f, x, r) : expr::evaluate_jet(f, x, r);
        best = std::max(best, std::fabs(signed_disp(x, j.value())));
        if (r >= 1) best = std::max(best, std::fabs(j.deriv(1) - 1.0));
        for (int i2 = 2; i2 <= r; ++i2) best = std::max(best, std::fabs(j.deriv(i2)));
    }
    return best;
}

inline double cr_norm(const MapPtr& f, int r, int grid = 1 << 14) {
    if (grid < 16) throw OutOfRange("cr_norm: grid >= 16 required");
    if (r < 0) throw OutOfRange("cr_norm: r >= 0 required");
    double fwd = cr_norm_minus_id(f, r, grid, false);
    double bwd = cr_norm_minus_id(f, r, grid, true);
    return std::max({fwd, bwd, 1.0});
}

inline double cr_distance_one_side(const MapPtr& f, const MapPtr& g, int r, int grid,
                                   bool inverted) {
    double best = 0.0;
    for (int i = 0; i < grid; ++i) {
        double x = static_cast<double>(i) / grid;
        Jet jf = inverted ? expr::evaluate_inverse_jet(f, x, r) : expr::evaluate_jet(f, x, r);
        Jet jg = inverted ? expr::evaluate_inverse_jet(g, x, r) : expr::evaluate_jet(g, x, r);
        best = std::max(best, cyc_dist(jf.value(), jg.value()));
        for (int k = 1; k <= r; ++k)
            best = std::max(best, std::fabs(jf.deriv(k) - jg.deriv(k)));
    }
    return best;
}

inline double dr_distance(const MapPtr& f, const MapPtr& g, int r, int grid = 1 << 14) {
    if (grid < 16) throw OutOfRange("dr_distance: grid >= 16 required");
    if (r < 0) throw OutOfRange("dr_distance: r >= 0 required");
    return std::max(cr_distance_one_side(f, g, r, grid, false),
                    cr_distance_one_side(f, g, r, grid, true));
}

// sup over the grid of |f(x) - x| (principal lift), without the floor at 1.
inline double displacement_sup(const MapPtr& f, int grid = 1 << 12) {
    double best = 0.0;
    for (int i = 0; i < grid; ++i) {
        double x = static_cast<double>(i) / grid;
        best = std::max(best, std::fabs(signed_disp(x, expr::evaluate(f, x))));
    }
    return best;
}

// sup over the grid of |f(g(x)) - g(f(x))|: commutation defect.
inline double commutation_defect(const MapPtr& f, const MapPtr& g, int grid = 1 << 12) {
    double best = 0.0;
    for (int i = 0; i < grid; ++i) {
        BigRat x(i, grid);
        double a = rat_to_double(expr::evaluate_rat(f, expr::evaluate_rat(g, x)));
        double b = rat_to_double(expr::evaluate_rat(g, expr::evaluate_rat(f, x)));
        best = std::max(best, cyc_dist(a, b));
    }
    return best;
}

// sup of first derivative on the grid, for L_{n-1}.
inline double derivative_sup(const MapPtr& f, int grid = 1 << 14, bool inverted = false) {
    double best = 0.0;
    for (int i = 0; i < grid; ++i) {
        double x = static_cast<double>(i) / grid;
        Jet j = inverted ? expr::evaluate_inverse_jet(f, x, 1) : expr::evaluate_jet(f, x, 1);
        best = std::max(best, std::fabs(j.deriv(1)));
    }
    return best;
}

}  // namespace akc
