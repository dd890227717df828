#pragma once

#include <cmath>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "akc/circle.hpp"
#include "akc/errors.hpp"
#include "akc/jet.hpp"
#include "akc/moebius.hpp"
#include "akc/rational.hpp"

namespace akc {

// Composition tree of primitive circle maps. Every node denotes an
// orientation-preserving diffeomorphism of S^1. Trees are immutable after
// construction; evaluation is pure.
struct MapExpr;
using MapPtr = std::shared_ptr<const MapExpr>;

struct MapExpr {
    enum class Kind { identity, rotation, moebius, lift, compose, inverse };

    Kind kind = Kind::identity;

    // rotation
    double angle = 0.0;
    std::optional<BigRat> angle_exact;

    // moebius; a_repr keeps the externally supplied parameter for
    // bit-stable serialization
    MoebiusMap moeb{1.0 / 3.0};
    std::optional<double> a_repr;

    // lift
    MapPtr inner;
    long long cover_q = 1;

    // compose: outer after inner_map, i.e. (lhs . rhs)(x) = lhs(rhs(x))
    MapPtr lhs;
    MapPtr rhs;
};

namespace expr {

inline MapPtr identity() {
    auto e = std::make_shared<MapExpr>();
    e->kind = MapExpr::Kind::identity;
    return e;
}

inline MapPtr rotation(double angle) {
    auto e = std::make_shared<MapExpr>();
    e->kind = MapExpr::Kind::rotation;
    e->angle = wrap01(angle);
    return e;
}

inline MapPtr rotation(const BigRat& angle) {
    auto e = std::make_shared<MapExpr>();
    e->kind = MapExpr::Kind::rotation;
    e->angle_exact = mod1(angle);
    e->angle = rat_to_double(*e->angle_exact);
    return e;
}

inline MapPtr moebius(const MoebiusMap& k) {
    auto e = std::make_shared<MapExpr>();
    e->kind = MapExpr::Kind::moebius;
    e->moeb = k;
    return e;
}

inline MapPtr moebius_from_a(double a) {
    auto e = std::make_shared<MapExpr>();
    e->kind = MapExpr::Kind::moebius;
    e->moeb = MoebiusMap::from_a(a);
    e->a_repr = a;
    return e;
}

double evaluate(const MapPtr& e, double x);  // fwd

// Lift of k by the q-fold covering, normalized so that fixed points of k
// lift to q fixed points (the branch with principal displacement). The
// inner map must have a fixed point; verified by a sign-change scan of the
// displacement unless the structure already guarantees one.
inline MapPtr lift(const MapPtr& k, long long q);

inline MapPtr compose(const MapPtr& l, const MapPtr& r) {
    if (l->kind == MapExpr::Kind::identity) return r;
    if (r->kind == MapExpr::Kind::identity) return l;
    auto e = std::make_shared<MapExpr>();
    e->kind = MapExpr::Kind::compose;
    e->lhs = l;
    e->rhs = r;
    return e;
}

inline MapPtr compose(const std::vector<MapPtr>& chain) {
    MapPtr acc = identity();
    for (auto it = chain.rbegin(); it != chain.rend(); ++it)
        acc = compose(*it, acc);
    return acc;
}

inline MapPtr inverse(const MapPtr& e) {
    if (e->kind == MapExpr::Kind::identity) return e;
    if (e->kind == MapExpr::Kind::inverse) return e->inner;
    auto out = std::make_shared<MapExpr>();
    out->kind = MapExpr::Kind::inverse;
    out->inner = e;
    return out;
}

// ---------------------------------------------------------------------
// evaluation

double evaluate_inverse(const MapPtr& e, double x);

inline double lift_formula(const MapPtr& inner, long long q, double x, bool inverted) {
    double xm = wrap01(x);
    double qx = static_cast<double>(q) * xm;
    double j = std::floor(qx);
    if (j >= q) j = q - 1;  // rounding guard at the wrap seam
    double y = qx - j;
    double img = inverted ? evaluate_inverse(inner, y) : evaluate(inner, y);
    double k_lift = y + signed_disp(y, img);
    return wrap01((j + k_lift) / static_cast<double>(q));
}

inline double evaluate(const MapPtr& e, double x) {
    switch (e->kind) {
        case MapExpr::Kind::identity: return wrap01(x);
        case MapExpr::Kind::rotation: return wrap01(x + e->angle);
        case MapExpr::Kind::moebius: return moebius_apply(e->moeb, x);
        case MapExpr::Kind::lift: return lift_formula(e->inner, e->cover_q, x, false);
        case MapExpr::Kind::compose: return evaluate(e->lhs, evaluate(e->rhs, x));
        case MapExpr::Kind::inverse: return evaluate_inverse(e->inner, x);
    }
    throw Error("evaluate: unreachable");
}

inline double evaluate_inverse(const MapPtr& e, double x) {
    switch (e->kind) {
        case MapExpr::Kind::identity: return wrap01(x);
        case MapExpr::Kind::rotation: return wrap01(x - e->angle);
        case MapExpr::Kind::moebius: return moebius_apply_inverse(e->moeb, x);
        case MapExpr::Kind::lift: return lift_formula(e->inner, e->cover_q, x, true);
        case MapExpr::Kind::compose:
            return evaluate_inverse(e->rhs, evaluate_inverse(e->lhs, x));
        case MapExpr::Kind::inverse: return evaluate(e->inner, x);
    }
    throw Error("evaluate_inverse: unreachable");
}

// ---------------------------------------------------------------------
// rational-threading evaluation: the covering bookkeeping (fiber index,
// branch selection, rotation angles) is done in exact arithmetic, and only
// the Moebius primitive rounds through double. This avoids the q-fold
// amplification of rounding noise that plain double evaluation suffers on
// stiff deep-stage lifts.

BigRat evaluate_inverse_rat(const MapPtr& e, const BigRat& x);

namespace detail_rat {
inline BigRat principal(const BigRat& diff) {
    BigRat d = mod1(diff);
    if (d > BigRat(1, 2)) d -= 1;
    return d;
}
}  // namespace detail_rat

inline BigRat evaluate_rat(const MapPtr& e, const BigRat& x) {
    switch (e->kind) {
        case MapExpr::Kind::identity: return mod1(x);
        case MapExpr::Kind::rotation:
            return mod1(x + (e->angle_exact ? *e->angle_exact : rat_from_double(e->angle)));
        case MapExpr::Kind::moebius:
            return moebius_apply_rat(e->moeb, x);
        case MapExpr::Kind::lift: {
            BigRat qx = BigRat(e->cover_q) * mod1(x);
            BigInt j = floor_rat(qx);
            BigRat y = qx - BigRat(j);
            BigRat img = evaluate_rat(e->inner, y);
            BigRat k_lift = y + detail_rat::principal(img - y);
            return mod1((BigRat(j) + k_lift) / BigRat(e->cover_q));
        }
        case MapExpr::Kind::compose: return evaluate_rat(e->lhs, evaluate_rat(e->rhs, x));
        case MapExpr::Kind::inverse: return evaluate_inverse_rat(e->inner, x);
    }
    throw Error("evaluate_rat: unreachable");
}

inline BigRat evaluate_inverse_rat(const MapPtr& e, const BigRat& x) {
    switch (e->kind) {
        case MapExpr::Kind::identity: return mod1(x);
        case MapExpr::Kind::rotation:
            return mod1(x - (e->angle_exact ? *e->angle_exact : rat_from_double(e->angle)));
        case MapExpr::Kind::moebius:
            return moebius_apply_inverse_rat(e->moeb, x);
        case MapExpr::Kind::lift: {
            BigRat qx = BigRat(e->cover_q) * mod1(x);
            BigInt j = floor_rat(qx);
            BigRat y = qx - BigRat(j);
            BigRat img = evaluate_inverse_rat(e->inner, y);
            BigRat k_lift = y + detail_rat::principal(img - y);
            return mod1((BigRat(j) + k_lift) / BigRat(e->cover_q));
        }
        case MapExpr::Kind::compose:
            return evaluate_inverse_rat(e->rhs, evaluate_inverse_rat(e->lhs, x));
        case MapExpr::Kind::inverse: return evaluate_rat(e->inner, x);
    }
    throw Error("evaluate_inverse_rat: unreachable");
}

inline MapPtr lift(const MapPtr& k, long long q) {
    if (q < 1) throw OutOfRange("lift: q >= 1 required");
    if (k->kind == MapExpr::Kind::identity) return k;
    // fixed-point scan: the displacement must change sign or vanish
    bool has_fix = false;
    const int scan = 512;
    double prev = signed_disp(0.0, evaluate(k, 0.0));
    for (int i = 1; i <= scan && !has_fix; ++i) {
        double x = static_cast<double>(i % scan) / scan;
        double d = signed_disp(x, evaluate(k, x));
        if (d == 0.0 || (d > 0) != (prev > 0)) has_fix = true;
        prev = d;
    }
    if (!has_fix)
        throw NormalizationUnavailable("lift: inner map appears fixed-point free");
    auto e = std::make_shared<MapExpr>();
    e->kind = MapExpr::Kind::lift;
    e->inner = k;
    e->cover_q = q;
    return e;
}

// ---------------------------------------------------------------------
// jets

Jet evaluate_jet(const MapPtr& e, double x, int r);
Jet evaluate_inverse_jet(const MapPtr& e, double x, int r);

inline Jet rotation_like_jet(double value, int r) {
    Jet j(r);
    j.d[0] = value;
    if (r >= 1) j.d[1] = 1.0;
    return j;
}

inline Jet lift_jet(const MapPtr& inner, long long q, double x, int r, bool inverted) {
    double xm = wrap01(x);
    double qx = static_cast<double>(q) * xm;
    double jj = std::floor(qx);
    if (jj >= q) jj = q - 1;
    double y = qx - jj;
    Jet in = inverted ? evaluate_inverse_jet(inner, y, r) : evaluate_jet(inner, y, r);
    Jet out(r);
    out.d[0] = lift_formula(inner, q, x, inverted);
    double scale = 1.0;  // q^{m-1}
    for (int m = 1; m <= r; ++m) {
        out.d[static_cast<size_t>(m)] = scale * in.d[static_cast<size_t>(m)];
        scale *= static_cast<double>(q);
    }
    return out;
}

inline Jet evaluate_jet(const MapPtr& e, double x, int r) {
    switch (e->kind) {
        case MapExpr::Kind::identity: return rotation_like_jet(wrap01(x), r);
        case MapExpr::Kind::rotation: return rotation_like_jet(wrap01(x + e->angle), r);
        case MapExpr::Kind::moebius: return moebius_jet(e->moeb, x, r);
        case MapExpr::Kind::lift: return lift_jet(e->inner, e->cover_q, x, r, false);
        case MapExpr::Kind::compose: {
            Jet jr = evaluate_jet(e->rhs, x, r);
            Jet jl = evaluate_jet(e->lhs, jr.value(), r);
            return jet_compose(jl, jr);
        }
        case MapExpr::Kind::inverse: return evaluate_inverse_jet(e->inner, x, r);
    }
    throw Error("evaluate_jet: unreachable");
}

inline Jet evaluate_inverse_jet(const MapPtr& e, double x, int r) {
    switch (e->kind) {
        case MapExpr::Kind::identity: return rotation_like_jet(wrap01(x), r);
        case MapExpr::Kind::rotation: return rotation_like_jet(wrap01(x - e->angle), r);
        case MapExpr::Kind::moebius: return moebius_inverse_jet(e->moeb, x, r);
        case MapExpr::Kind::lift: return lift_jet(e->inner, e->cover_q, x, r, true);
        case MapExpr::Kind::compose: {
            Jet jl = evaluate_inverse_jet(e->lhs, x, r);
            Jet jr = evaluate_inverse_jet(e->rhs, jl.value(), r);
            return jet_compose(jr, jl);
        }
        case MapExpr::Kind::inverse: return evaluate_jet(e->inner, x, r);
    }
    throw Error("evaluate_inverse_jet: unreachable");
}

// ---------------------------------------------------------------------
// generic inversion by monotone cyclic bisection (closed forms above make
// this a fallback/oracle; kept for black-box monotone maps)

inline double invert_by_bisection(const MapPtr& e, double target, double tol = 1e-14,
                                  int budget = 200) {
    const int coarse = 64;
    double lo = 0.0, hi = 0.0;
    bool found = false;
    for (int i = 0; i < coarse && !found; ++i) {
        double a = static_cast<double>(i) / coarse;
        double b = static_cast<double>(i + 1) / coarse;
        double fa = evaluate(e, a), fb = evaluate(e, b);
        double span = cyc_gap(fa, fb);
        if (span == 0.0) span = 1.0;  // full wrap within one cell
        if (cyc_gap(fa, target) <= span) {
            lo = a;
            hi = b;
            found = true;
        }
    }
    if (!found) throw ToleranceNotMet("invert_by_bisection: no bracketing cell");
    for (int it = 0; it < budget && (hi - lo) > tol; ++it) {
        double mid = 0.5 * (lo + hi);
        double fl = evaluate(e, lo), fm = evaluate(e, mid);
        double span = cyc_gap(fl, fm);
        if (cyc_gap(fl, target) <= span)
            hi = mid;
        else
            lo = mid;
    }
    if ((hi - lo) > tol)
        throw ToleranceNotMet("invert_by_bisection: budget exhausted");
    return wrap01(0.5 * (lo + hi));
}

// ---------------------------------------------------------------------
// JSON serialization. Schema:
//   {"rot": "p/q"} | {"rot": 0.25} | {"moebius": a} |
//   {"moebius": {"t": t}} | {"lift": {"q": q, "inner": E}} |
//   {"comp": [E...]} | {"inv": E}
// Identity is the empty composition {"comp": []}.

inline nlohmann::json to_json(const MapPtr& e) {
    using nlohmann::json;
    switch (e->kind) {
        case MapExpr::Kind::identity: return json{{"comp", json::array()}};
        case MapExpr::Kind::rotation:
            if (e->angle_exact) return json{{"rot", rat_to_string(*e->angle_exact)}};
            return json{{"rot", e->angle}};
        case MapExpr::Kind::moebius:
            if (e->a_repr) return json{{"moebius", *e->a_repr}};
            if (e->moeb.t >= 1e-9) return json{{"moebius", e->moeb.a()}};
            return json{{"moebius", {{"t", e->moeb.t}}}};
        case MapExpr::Kind::lift:
            return json{{"lift", {{"q", e->cover_q}, {"inner", to_json(e->inner)}}}};
        case MapExpr::Kind::compose: {
            json arr = json::array();
            // flatten left-leaning chains for readability
            std::vector<MapPtr> stack{e};
            std::vector<MapPtr> flat;
            while (!stack.empty()) {
                MapPtr cur = stack.back();
                stack.pop_back();
                if (cur->kind == MapExpr::Kind::compose) {
                    stack.push_back(cur->rhs);
                    stack.push_back(cur->lhs);
                } else {
                    flat.push_back(cur);
                }
            }
            for (auto& m : flat) arr.push_back(to_json(m));
            return json{{"comp", arr}};
        }
        case MapExpr::Kind::inverse: return json{{"inv", to_json(e->inner)}};
    }
    throw Error("to_json: unreachable");
}

inline MapPtr from_json(const nlohmann::json& j) {
    if (j.contains("rot")) {
        if (j["rot"].is_string()) return rotation(rat_from_string(j["rot"].get<std::string>()));
        return rotation(j["rot"].get<double>());
    }
    if (j.contains("moebius")) {
        const auto& m = j["moebius"];
        if (m.is_object()) return moebius(MoebiusMap::from_t(m.at("t").get<double>()));
        return moebius_from_a(m.get<double>());
    }
    if (j.contains("lift")) {
        const auto& l = j["lift"];
        return lift(from_json(l.at("inner")), l.at("q").get<long long>());
    }
    if (j.contains("comp")) {
        std::vector<MapPtr> chain;
        for (const auto& c : j["comp"]) chain.push_back(from_json(c));
        return compose(chain);
    }
    if (j.contains("inv")) return inverse(from_json(j["inv"]));
    throw MalformedInput("from_json: unknown map expression node: " + j.dump());
}

}  // namespace expr

}  // namespace akc
