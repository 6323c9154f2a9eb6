#pragma once

// Invariant-manifold curves, parametrized exactly through the dynamics.
//
// A branch of W^u or W^s is represented as the image of a microscopic seed
// chord at the saddle under F^k (F = f for unstable, f^{-1} for stable):
// z(t) = F^k(c0 + t (c1 - c0)). Every refinement re-evaluates that chain, so
// there is no interpolation error anywhere; the only bias is the seed chord's
// sagitta (~kappa T0^2), which the transverse contraction of F^k shrusks
// further. Polylines are caches, not the source of truth.

#include <algorithm>
#include <cmath>
#include <functional>
#include <stdexcept>
#include <vector>

#include "henonlab/map.hpp"

namespace henonlab {

struct ParamArc {
    MapParams map;
    Vec2 c0, c1;
    int steps = 0;  // signed: +k applies f^k, -k applies f^{-k}

    static constexpr double bailout = 1e8;

    Vec2 eval(double t) const {
        Vec2 z = c0 + t * (c1 - c0);
        int n = steps;
        for (; n > 0; --n) {
            z = henon_apply(map, z);
            if (!(std::abs(z.x) < bailout && std::abs(z.y) < bailout))
                return {std::numeric_limits<double>::infinity(),
                        std::numeric_limits<double>::infinity()};
        }
        for (; n < 0; ++n) {
            z = henon_inverse(map, z);
            if (!(std::abs(z.x) < bailout && std::abs(z.y) < bailout))
                return {std::numeric_limits<double>::infinity(),
                        std::numeric_limits<double>::infinity()};
        }
        return z;
    }

    // Tangent direction of the arc at t (unit), from the Jacobian chain.
    Vec2 tangent(double t) const {
        Vec2 z = c0 + t * (c1 - c0);
        Vec2 v = normalized(c1 - c0);
        int n = steps;
        for (; n > 0; --n) {
            v = henon_jacobian(map, z).apply(v);
            z = henon_apply(map, z);
            double nv = v.norm();
            if (nv > 0) v = v / nv;
        }
        for (; n < 0; ++n) {
            v = henon_inverse_jacobian(map, z).apply(v);
            z = henon_inverse(map, z);
            double nv = v.norm();
            if (nv > 0) v = v / nv;
        }
        return v;
    }

    ParamArc with_steps(int s) const { return {map, c0, c1, s}; }
};

struct CurveNode {
    double t;
    Vec2 z;
};

struct GrowOptions {
    double seed_len = 1e-6;       // chord half-length at the saddle
    double max_seg_len = 2e-3;
    double max_turn_angle = 0.12;  // radians
    std::size_t point_budget = 2000000;
    Box guard{-3.5, 3.5, -3.5, 3.5};
    int max_depth = 80;
};

// Adaptive polyline over one ParamArc, refined where the curve is inside (or
// crossing the edge of) the guard box.
class ArcPolyline {
  public:
    ArcPolyline() = default;
    ArcPolyline(ParamArc arc, double t0, double t1, const GrowOptions& opt, std::size_t init = 64)
        : arc_(arc), opt_(opt) {
        nodes_.reserve(init + 1);
        for (std::size_t i = 0; i <= init; ++i) {
            double t = t0 + (t1 - t0) * double(i) / double(init);
            nodes_.push_back({t, arc_.eval(t)});
        }
        refine();
    }

    const ParamArc& arc() const { return arc_; }
    const std::vector<CurveNode>& nodes() const { return nodes_; }

    // Cumulative arclength over finite nodes.
    std::vector<double> arclength() const {
        std::vector<double> s(nodes_.size(), 0.0);
        for (std::size_t i = 1; i < nodes_.size(); ++i) {
            double d = 0.0;
            if (nodes_[i].z.finite() && nodes_[i - 1].z.finite())
                d = dist(nodes_[i].z, nodes_[i - 1].z);
            s[i] = s[i - 1] + d;
        }
        return s;
    }

    // Arclength restricted to segments lying inside `box`.
    double length_within(const Box& box) const {
        double acc = 0.0;
        for (std::size_t i = 1; i < nodes_.size(); ++i)
            if (nodes_[i].z.finite() && nodes_[i - 1].z.finite() &&
                box.contains(nodes_[i].z) && box.contains(nodes_[i - 1].z))
                acc += dist(nodes_[i].z, nodes_[i - 1].z);
        return acc;
    }

    void refine() {
        bool changed = true;
        int rounds = 0;
        while (changed && ++rounds < 64 && nodes_.size() < opt_.point_budget) {
            changed = false;
            std::vector<CurveNode> out;
            out.reserve(nodes_.size() * 2);
            Box inflated = opt_.guard.padded(0.05);
            for (std::size_t i = 0; i < nodes_.size(); ++i) {
                out.push_back(nodes_[i]);
                if (i + 1 == nodes_.size()) break;
                const auto& a = nodes_[i];
                const auto& b = nodes_[i + 1];
                bool relevant = (a.z.finite() && inflated.contains(a.z)) ||
                                (b.z.finite() && inflated.contains(b.z));
                if (!relevant) continue;
                bool split = false;
                if (!a.z.finite() || !b.z.finite()) {
                    split = (b.t - a.t) > 1e-15 * std::max(1.0, std::abs(a.t));
                } else {
                    double seg = dist(a.z, b.z);
                    if (seg > opt_.max_seg_len) split = true;
                    else if (i + 2 < nodes_.size() && nodes_[i + 2].z.finite()) {
                        double ang = vec_angle(b.z - a.z, nodes_[i + 2].z - b.z);
                        if (ang > opt_.max_turn_angle && seg > 1e-12) split = true;
                    }
                }
                if (split && out.size() + nodes_.size() < opt_.point_budget) {
                    double tm = 0.5 * (a.t + b.t);
                    if (tm > a.t && tm < b.t) {
                        out.push_back({tm, arc_.eval(tm)});
                        changed = true;
                    }
                }
            }
            nodes_.swap(out);
        }
    }

  private:
    ParamArc arc_;
    GrowOptions opt_;
    std::vector<CurveNode> nodes_;
};

enum class Stability { Stable, Unstable };

// Orientation convention for unstable branches of Q: the positive ray points
// into the dynamics (increasing x from Q near (-1, 0)), matching psi with
// psi(s < 0) outside the nonwandering set.
inline Vec2 psi_oriented(const TangentDir& d) {
    Vec2 u = d.unit();
    return (u.x < 0.0) ? Vec2{-u.x, -u.y} : u;
}

// Spec-facing curve record: ordered points with cumulative arclength.
struct ManifoldCurve {
    SaddleLabel saddle_label = SaddleLabel::Q;
    Stability stability = Stability::Unstable;
    std::vector<Vec2> points;
    std::vector<double> arclength;
    double max_seg_len = 0.0;
    double max_turn_angle = 0.0;
};

// A saddle branch grown as one exact arc. t = 0 is the saddle; positive t
// walks along `dir`.
class Branch {
  public:
    Branch() = default;

    // dir must be a unit vector along the relevant eigendirection.
    Branch(const MapParams& p, const Saddle& s, Stability st, Vec2 dir,
           double target_arclength, GrowOptions opt = {})
        : params_(p), saddle_(s), stability_(st), opt_(opt) {
        double lam = (st == Stability::Unstable) ? s.eig_unstable : s.eig_stable;
        if (lam == 0.0) throw std::invalid_argument("Branch: degenerate eigenvalue");
        double grow = (st == Stability::Unstable) ? std::abs(lam) : 1.0 / std::abs(lam);
        if (grow <= 1.0) throw std::invalid_argument("Branch: not expanding in the chosen time direction");

        int k = int(std::ceil(std::log(1.3 * target_arclength / opt.seed_len) / std::log(grow)));
        k = std::max(k, 1);
        if (lam < 0.0 && (k % 2)) ++k;  // negative multiplier: even power keeps sides fixed
        k = std::min(k, opt.max_depth);

        int sign = (st == Stability::Unstable) ? 1 : -1;
        // seed chord through the saddle; t in [-1, 1], t=0 at the saddle
        ParamArc arc{p, s.location, s.location + opt.seed_len * dir, sign * k};

        for (int tries = 0; tries < 24; ++tries) {
            poly_pos_ = ArcPolyline(arc, 0.0, 1.0, opt, 128);
            double len = poly_pos_.length_within(opt.guard);
            if (len >= target_arclength || std::abs(arc.steps) >= opt.max_depth) break;
            arc.steps += sign * ((lam < 0.0) ? 2 : 1);
        }
        arc_ = poly_pos_.arc();
        poly_neg_ = ArcPolyline(ParamArc{p, s.location, s.location - opt.seed_len * dir, arc_.steps},
                                0.0, 1.0, opt, 128);
    }

    const MapParams& params() const { return params_; }
    const Saddle& saddle() const { return saddle_; }
    const ParamArc& arc() const { return arc_; }           // positive side
    const ArcPolyline& poly() const { return poly_pos_; }  // positive side
    const ArcPolyline& poly_neg() const { return poly_neg_; }
    Stability stability() const { return stability_; }

    // Exact point at chord parameter t (t >= 0 positive side, t < 0 mirror).
    Vec2 eval(double t) const {
        if (t >= 0.0) return arc_.eval(t);
        ParamArc m{params_, saddle_.location,
                   saddle_.location - (arc_.c1 - arc_.c0), arc_.steps};
        return m.eval(-t);
    }

    ManifoldCurve to_manifold_curve(bool positive_side = true) const {
        const ArcPolyline& pl = positive_side ? poly_pos_ : poly_neg_;
        ManifoldCurve c;
        c.saddle_label = saddle_.label;
        c.stability = stability_;
        for (const auto& n : pl.nodes())
            if (n.z.finite()) c.points.push_back(n.z);
        c.arclength.resize(c.points.size(), 0.0);
        for (std::size_t i = 1; i < c.points.size(); ++i) {
            double seg = dist(c.points[i], c.points[i - 1]);
            c.arclength[i] = c.arclength[i - 1] + seg;
            c.max_seg_len = std::max(c.max_seg_len, seg);
            if (i + 1 < c.points.size())
                c.max_turn_angle = std::max(
                    c.max_turn_angle,
                    vec_angle(c.points[i] - c.points[i - 1], c.points[i + 1] - c.points[i]));
        }
        return c;
    }

  private:
    MapParams params_;
    Saddle saddle_;
    Stability stability_ = Stability::Unstable;
    GrowOptions opt_;
    ParamArc arc_;
    ArcPolyline poly_pos_, poly_neg_;
};

// ---- scalar search helpers on t -> coordinate maps ----

inline double bisect_on(const std::function<double(double)>& f, double lo, double hi,
                        int iters = 200) {
    double flo = f(lo);
    double fhi = f(hi);
    if (flo == 0.0) return lo;
    if (fhi == 0.0) return hi;
    if ((flo < 0) == (fhi < 0)) throw std::runtime_error("bisect_on: no sign change");
    for (int i = 0; i < iters; ++i) {
        double mid = 0.5 * (lo + hi);
        if (mid <= lo || mid >= hi) break;
        double fm = f(mid);
        if ((fm < 0) == (flo < 0)) { lo = mid; flo = fm; }
        else { hi = mid; fhi = fm; }
    }
    return 0.5 * (lo + hi);
}

// golden-section minimize; f unimodal on [lo, hi]
inline double golden_min(const std::function<double(double)>& f, double lo, double hi,
                         int iters = 160) {
    const double g = 0.6180339887498949;
    double a = lo, b = hi;
    double x1 = b - g * (b - a), x2 = a + g * (b - a);
    double f1 = f(x1), f2 = f(x2);
    for (int i = 0; i < iters && (b - a) > 1e-300; ++i) {
        if (f1 < f2) { b = x2; x2 = x1; f2 = f1; x1 = b - g * (b - a); f1 = f(x1); }
        else { a = x1; x1 = x2; f1 = f2; x2 = a + g * (b - a); f2 = f(x2); }
    }
    return f1 < f2 ? x1 : x2;
}

// ---- curve views and window passes ----

// Both sides of a branch stitched through the saddle: nodes ordered along the
// curve with a signed parameter (negative side mirrored) and signed arclength
// tags, s = 0 at the saddle. For Q's unstable branch this matches the paper's
// isometric parametrization psi up to the polyline's metric error.
struct CurveView {
    std::vector<CurveNode> nodes;  // node.t signed
    std::vector<double> s;         // signed arclength tags
    ParamArc arc_pos, arc_neg;

    Vec2 eval(double t) const { return t >= 0.0 ? arc_pos.eval(t) : arc_neg.eval(-t); }
};

inline CurveView branch_view(const Branch& br) {
    CurveView v;
    v.arc_pos = br.arc();
    v.arc_neg = ParamArc{br.params(), br.arc().c0, br.arc().c0 - (br.arc().c1 - br.arc().c0),
                         br.arc().steps};
    const auto& neg = br.poly_neg().nodes();
    const auto& pos = br.poly().nodes();
    v.nodes.reserve(neg.size() + pos.size());
    for (auto it = neg.rbegin(); it != neg.rend(); ++it) v.nodes.push_back({-it->t, it->z});
    for (const auto& n : pos) v.nodes.push_back({n.t, n.z});
    // signed arclength, zero at the saddle (t = 0)
    v.s.assign(v.nodes.size(), 0.0);
    std::size_t zero = 0;
    for (std::size_t i = 0; i < v.nodes.size(); ++i)
        if (std::abs(v.nodes[i].t) <= std::abs(v.nodes[zero].t)) zero = i;
    for (std::size_t i = zero + 1; i < v.nodes.size(); ++i) {
        double d = (v.nodes[i].z.finite() && v.nodes[i - 1].z.finite())
                       ? dist(v.nodes[i].z, v.nodes[i - 1].z) : 0.0;
        v.s[i] = v.s[i - 1] + d;
    }
    for (std::size_t i = zero; i-- > 0;) {
        double d = (v.nodes[i].z.finite() && v.nodes[i + 1].z.finite())
                       ? dist(v.nodes[i].z, v.nodes[i + 1].z) : 0.0;
        v.s[i] = v.s[i + 1] - d;
    }
    return v;
}

// One-sided view (the positive ray only).
inline CurveView branch_view_positive(const Branch& br) {
    CurveView v;
    v.arc_pos = br.arc();
    v.arc_neg = v.arc_pos;
    v.nodes = br.poly().nodes();
    v.s = br.poly().arclength();
    return v;
}

// Maximal runs of the view inside `win`, each one "pass" (sheet) of the curve.
struct CurvePass {
    std::size_t first = 0, last = 0;  // node indices, inclusive
    double s_begin = 0.0, s_end = 0.0;
    double x_min = 0.0, x_max = 0.0;
    double y_mean = 0.0;
};

inline std::vector<CurvePass> window_passes(const CurveView& view, const Box& win) {
    std::vector<CurvePass> out;
    const auto& nodes = view.nodes;

    auto flush = [&](std::size_t first, std::size_t last) {
        if (last <= first) return;
        CurvePass p;
        p.first = first;
        p.last = last;
        p.x_min = p.x_max = nodes[first].z.x;
        double ysum = 0.0;
        for (std::size_t j = first; j <= last; ++j) {
            p.x_min = std::min(p.x_min, nodes[j].z.x);
            p.x_max = std::max(p.x_max, nodes[j].z.x);
            ysum += nodes[j].z.y;
        }
        p.s_begin = view.s[first];
        p.s_end = view.s[last];
        p.y_mean = ysum / double(last - first + 1);
        out.push_back(p);
    };

    std::size_t i = 0;
    while (i < nodes.size()) {
        if (!nodes[i].z.finite() || !win.contains(nodes[i].z)) { ++i; continue; }
        std::size_t run_first = i;
        int dir = 0;  // sign of dx along the run; runs are split at folds
        std::size_t seg_first = run_first;
        while (i + 1 < nodes.size() && nodes[i + 1].z.finite() && win.contains(nodes[i + 1].z)) {
            double dx = nodes[i + 1].z.x - nodes[i].z.x;
            int d = (dx > 0) - (dx < 0);
            if (d != 0 && dir != 0 && d != dir) {
                flush(seg_first, i);
                seg_first = i;
                dir = d;
            } else if (d != 0) {
                dir = d;
            }
            ++i;
        }
        flush(seg_first, i);
        ++i;
    }
    return out;
}

// y at a given x on one pass, via exact parameter bisection between the
// bracketing nodes. Requires the pass to be single-valued in x there.
inline double pass_y_at_x(const CurveView& view, const CurvePass& p, double x) {
    const auto& nodes = view.nodes;
    for (std::size_t i = p.first; i < p.last; ++i) {
        double x0 = nodes[i].z.x, x1 = nodes[i + 1].z.x;
        if ((x0 - x) * (x1 - x) <= 0.0 && x0 != x1) {
            double t = bisect_on([&](double tt) { return view.eval(tt).x - x; },
                                 nodes[i].t, nodes[i + 1].t, 100);
            return view.eval(t).y;
        }
    }
    throw std::runtime_error("pass_y_at_x: x outside pass");
}

}  // namespace henonlab
