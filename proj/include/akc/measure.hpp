#pragma once

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "akc/circle.hpp"
#include "akc/errors.hpp"
#include "akc/expr.hpp"

namespace akc {

struct MeasureHistogram {
    int bins = 2;
    std::vector<double> mass;

    double bin_width() const { return 1.0 / bins; }
    void check() const {
        if (bins < 2 || static_cast<int>(mass.size()) != bins)
            throw MalformedInput("MeasureHistogram: bins/mass mismatch");
        double s = std::accumulate(mass.begin(), mass.end(), 0.0);
        if (std::fabs(s - 1.0) > 1e-12)
            throw MalformedInput("MeasureHistogram: mass does not sum to 1");
    }
};

struct IntervalFamily {
    std::vector<CircleInterval> intervals;  // pairwise disjoint, cyclic order
};

struct DimensionEstimate {
    std::vector<double> epsilons;
    std::vector<long long> counts;
    double slope = 0.0;
    double mass_threshold = 0.0;
};

// mu_f = H_* Leb for f = H R_alpha H^{-1}: bin mass is the length of the
// H-preimage of the bin, read off H^{-1} at the endpoints.
inline MeasureHistogram pushforward_lebesgue(const MapPtr& H, int bins) {
    if (bins < 2) throw OutOfRange("pushforward_lebesgue: bins >= 2 required");
    MeasureHistogram mu;
    mu.bins = bins;
    mu.mass.resize(static_cast<size_t>(bins));
    std::vector<double> pre(static_cast<size_t>(bins) + 1);
    for (int i = 0; i <= bins; ++i)
        pre[static_cast<size_t>(i)] = expr::evaluate_inverse(H, wrap01(double(i) / bins));
    double total = 0.0;
    for (int i = 0; i < bins; ++i) {
        double g = cyc_gap(pre[static_cast<size_t>(i)], pre[static_cast<size_t>(i) + 1]);
        mu.mass[static_cast<size_t>(i)] = g;
        total += g;
    }
    // endpoint wrap leaves total = 1 up to evaluation noise; renormalize it away
    for (auto& m : mu.mass) m /= total;
    return mu;
}

inline MeasureHistogram birkhoff_histogram(const MapPtr& f, double x0, long long iterations,
                                           int bins) {
    if (bins < 2) throw OutOfRange("birkhoff_histogram: bins >= 2 required");
    if (iterations < bins) throw OutOfRange("birkhoff_histogram: iterations >= bins required");
    MeasureHistogram mu;
    mu.bins = bins;
    mu.mass.assign(static_cast<size_t>(bins), 0.0);
    double x = wrap01(x0);
    for (long long k = 0; k < iterations; ++k) {
        int b = std::min(bins - 1, static_cast<int>(x * bins));
        mu.mass[static_cast<size_t>(b)] += 1.0;
        x = expr::evaluate(f, x);
    }
    for (auto& m : mu.mass) m /= static_cast<double>(iterations);
    return mu;
}

namespace detail {
// mass of one cyclic arc under the histogram, partial bins prorated linearly
inline double arc_mass(const MeasureHistogram& mu, const CircleInterval& arc) {
    double len = arc.length();
    if (len >= 1.0) return 1.0;
    double w = mu.bin_width();
    double total = 0.0;
    // walk the bins the arc touches
    int first = static_cast<int>(wrap01(arc.left) / w);
    double covered = 0.0;
    double pos = wrap01(arc.left);
    int b = std::min(mu.bins - 1, first);
    while (covered < len - 1e-15) {
        double bin_right = (b + 1) * w;
        double chunk = std::min(bin_right - pos, len - covered);
        total += mu.mass[static_cast<size_t>(b)] * (chunk / w);
        covered += chunk;
        pos = bin_right;
        b = (b + 1) % mu.bins;
        if (pos >= 1.0) pos = 0.0;
    }
    return total;
}
}  // namespace detail

inline double family_mass(const MeasureHistogram& mu, const IntervalFamily& fam) {
    mu.check();
    double s = 0.0;
    for (const auto& arc : fam.intervals) s += detail::arc_mass(mu, arc);
    return std::min(1.0, s);
}

namespace detail {

// minimal number of radius-eps balls covering a cyclic union of arcs,
// greedy left-to-right sweep (optimal for unions of arcs on the circle)
inline long long cover_count(const std::vector<CircleInterval>& runs, double eps) {
    if (runs.empty()) return 0;
    // full circle
    double total = 0.0;
    for (const auto& r : runs) total += r.length();
    if (total >= 1.0 - 1e-15) return static_cast<long long>(std::ceil(1.0 / (2 * eps)));
    // linearize starting at the left end of the first run; runs are assumed
    // disjoint and in cyclic order
    double origin = runs.front().left;
    std::vector<std::pair<double, double>> segs;
    for (const auto& r : runs) {
        double a = cyc_gap(origin, r.left);
        segs.emplace_back(a, a + r.length());
    }
    std::sort(segs.begin(), segs.end());
    long long count = 0;
    double covered_to = -1.0;
    for (const auto& [a, b] : segs) {
        double p = std::max(a, covered_to);
        while (p < b) {
            ++count;
            covered_to = p + 2 * eps;
            p = covered_to;
        }
    }
    return count;
}

inline double fit_slope(const std::vector<double>& eps, const std::vector<long long>& n) {
    size_t m = eps.size();
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (size_t i = 0; i < m; ++i) {
        double x = std::log(1.0 / eps[i]);
        double y = std::log(static_cast<double>(std::max<long long>(1, n[i])));
        sx += x; sy += y; sxx += x * x; sxy += x * y;
    }
    double d = m * sxx - sx * sx;
    if (std::fabs(d) < 1e-30) return 0.0;
    return (m * sxy - sx * sy) / d;
}

}  // namespace detail

inline DimensionEstimate lower_box_dimension(const MeasureHistogram& mu, double mass_threshold,
                                             std::vector<double> epsilons) {
    mu.check();
    if (!(mass_threshold > 0.0 && mass_threshold < 1.0))
        throw OutOfRange("lower_box_dimension: mass_threshold in (0,1) required");
    if (epsilons.size() < 2)
        throw OutOfRange("lower_box_dimension: at least two epsilons required");
    std::sort(epsilons.begin(), epsilons.end(), std::greater<>());
    double w = mu.bin_width();
    for (double e : epsilons)
        if (!(e > 0.0 && e <= 0.5) || e < 2.0 * w)
            throw OutOfRange("lower_box_dimension: epsilon below bin resolution or out of range");

    // heaviest bins first until mass exceeds the threshold
    std::vector<int> order(static_cast<size_t>(mu.bins));
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(),
              [&](int a, int b) { return mu.mass[static_cast<size_t>(a)] >
                                         mu.mass[static_cast<size_t>(b)]; });
    std::vector<char> picked(static_cast<size_t>(mu.bins), 0);
    double acc = 0.0;
    int picked_count = 0;
    for (int b : order) {
        picked[static_cast<size_t>(b)] = 1;
        ++picked_count;
        acc += mu.mass[static_cast<size_t>(b)];
        if (acc > mass_threshold) break;
    }
    if (picked_count == mu.bins) {
        DimensionEstimate est;
        est.mass_threshold = mass_threshold;
        est.epsilons = epsilons;
        for (double e : epsilons)
            est.counts.push_back(static_cast<long long>(std::ceil(1.0 / (2 * e))));
        est.slope = detail::fit_slope(est.epsilons, est.counts);
        return est;
    }
    // merge adjacent picked bins into runs, cyclically
    std::vector<CircleInterval> runs;
    int start = -1;
    for (int b = 0; b < mu.bins; ++b) {
        if (picked[static_cast<size_t>(b)] && start < 0) start = b;
        if (!picked[static_cast<size_t>(b)] && start >= 0) {
            runs.push_back({start * w, b * w});
            start = -1;
        }
    }
    if (start >= 0) {
        if (!runs.empty() && runs.front().left == 0.0 && picked[0]) {
            runs.front().left = wrap01(start * w);  // wrap around 0
        } else {
            runs.push_back({start * w, wrap01(0.0)});
        }
    }

    DimensionEstimate est;
    est.mass_threshold = mass_threshold;
    est.epsilons = epsilons;
    for (double e : epsilons) est.counts.push_back(detail::cover_count(runs, e));
    est.slope = detail::fit_slope(est.epsilons, est.counts);
    return est;
}

// -- exports ---------------------------------------------------------------

inline std::string histogram_to_csv(const MeasureHistogram& mu) {
    std::ostringstream os;
    os.precision(17);
    os << "bin_index,left_endpoint,mass\n";
    for (int i = 0; i < mu.bins; ++i)
        os << i << "," << (double(i) / mu.bins) << "," << mu.mass[static_cast<size_t>(i)]
           << "\n";
    return os.str();
}

inline nlohmann::json dimension_to_json(const DimensionEstimate& e) {
    nlohmann::json j;
    j["mass_threshold"] = e.mass_threshold;
    j["table"] = nlohmann::json::array();
    for (size_t i = 0; i < e.epsilons.size(); ++i)
        j["table"].push_back({{"epsilon", e.epsilons[i]}, {"count", e.counts[i]}});
    j["slope"] = e.slope;
    return j;
}

}  // namespace akc
