#pragma once

// Stable/unstable manifold geometry near the first bifurcation: the
// W^s(Q)-fold parabola near the origin, the unstable sheets crossing above
// and below it, the tangency functional, and the bisections for a*(b) and
// a**(b).
//
// Orientation facts used throughout (verified by the b -> 0 limit): the
// second preimage of W^s_loc(Q) is an upward parabola near the origin whose
// vertex height is -x_Q(a) - 1 + O(b); it descends as a grows. Coming down it
// first touches the top cluster of unstable sheets (the arc the paper calls
// l^u, at psi-arclength ~1 for det>0 and ~3 for det<0) at a = a**, and last
// the bottom sheet (an unstable side of R) at a = a*. For a > a* the parabola
// crosses the whole band: the horseshoe regime.

#include <cmath>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "henonlab/curve.hpp"
#include "henonlab/map.hpp"

namespace henonlab {

struct TangencyReport {
    double parameter = 0.0;   // a at tangency
    Vec2 point;               // near-tangency location (zeta_0 for a*)
    double gap = 0.0;         // residual signed gap at the reported parameter
    SaddleLabel stable_of = SaddleLabel::Q;
    SaddleLabel unstable_of = SaddleLabel::Q;
};

struct TangencyOptions {
    Box window{-0.3, 0.3, -0.1, 0.1};
    double bracket_lo = 1.9;
    double bracket_hi = 2.3;
    double a_tolerance = 1e-10;
    double unstable_arclength = 4.8;
    GrowOptions grow;
};

// ---- W^s(Q) fold parabola ----

// The near-origin piece of f^{-2}(W^s_loc(Q)), evaluated as a graph over x by
// forward shooting: y_at_x(x) solves "f^{2+m}((x, y)) lands on the stable
// eigenline at Q". Forward evaluation avoids the 1/b roundoff amplification
// of inverse iteration; at the root the landing point sits within ~1e-7 of Q,
// where the linear model of W^s_loc is exact to machine precision.
struct StableShoot;  // below

struct FoldParabola {
    MapParams p;
    Vec2 q;                 // saddle location
    Vec2 ns;                // unit normal to the stable eigendirection
    double vertex_base = 0; // crude b=0 vertex height x_c - 1
    double x_lo = 0, x_hi = 0;
    int steps = 4;
    double corridor = 0.02;

    std::optional<double> try_y_at_x(double x) const;
    double y_at_x(double x) const {
        auto r = try_y_at_x(x);
        if (!r) throw std::runtime_error("FoldParabola: no stable-sheet crossing at x");
        return *r;
    }

    double x_min() const { return x_lo; }
    double x_max() const { return x_hi; }
};

// Root of the stable-landing coordinate along a probe segment. The probe
// holds one coordinate fixed and scans the other from the `from_hi` end; the
// first valid sign change is the outermost sheet of W^s(saddle) crossing the
// probe. Used for the fold parabola (vertical probes), the steep arm alpha_0^+
// (horizontal probes), and the W^s(P) curves of Theta.
struct StableShoot {
    MapParams p;
    Vec2 q;   // saddle location
    Vec2 ns;  // unit normal to its stable eigendirection
    int steps = 4;
    double corridor = 0.02;

    double land(const Vec2& z0) const {
        Vec2 z = z0;
        for (int i = 0; i < steps; ++i) {
            z = henon_apply(p, z);
            if (!(std::abs(z.x) < 4.0 && std::abs(z.y) < 4.0))
                return std::numeric_limits<double>::quiet_NaN();
        }
        Vec2 d = z - q;
        if (d.norm() > corridor) return std::numeric_limits<double>::quiet_NaN();
        return dot(ns, d);
    }

    // axis 0: probe along x at fixed y; axis 1: probe along y at fixed x
    std::optional<double> first_root(int axis, double fixed, double lo, double hi, bool from_hi,
                                     int samples = 600) const {
        auto F = [&](double s) {
            return land(axis == 0 ? Vec2{s, fixed} : Vec2{fixed, s});
        };
        double prev = std::numeric_limits<double>::quiet_NaN();
        double prev_s = 0.0;
        for (int i = 0; i <= samples; ++i) {
            double u = double(i) / samples;
            double s = from_hi ? hi - (hi - lo) * u : lo + (hi - lo) * u;
            double v = F(s);
            if (std::isfinite(v) && std::isfinite(prev) && (v < 0) != (prev < 0))
                return bisect_on(F, prev_s, s, 110);
            prev = v;
            prev_s = s;
        }
        return std::nullopt;
    }

    // Re-solve an approximate root against a deeper landing. The eigenline
    // models W^s only up to its curvature (which is O(1/b) here), so each two
    // extra steps shrink the landing by eig_stable^2 and kill that bias.
    std::optional<double> refine_root(int axis, double fixed, double s0, int total_steps,
                                      double halfwidth) const {
        StableShoot deep = *this;
        deep.steps = total_steps;
        return deep.first_root(axis, fixed, s0 - halfwidth, s0 + halfwidth, false, 1200);
    }
};

inline StableShoot stable_shoot_for(const MapParams& p, const Saddle& s, int steps,
                                    double corridor = 0.02) {
    Vec2 vs = s.dir_stable.unit();
    return {p, s.location, {-vs.y, vs.x}, steps, corridor};
}

// scan downward: the first crossing from above is the outermost (topmost)
// W^s(Q) sheet, which is the fold parabola
inline std::optional<double> FoldParabola::try_y_at_x(double x) const {
    StableShoot sh{p, q, ns, steps, corridor};
    double yc = vertex_base + p.a * x * x;
    double span = 8.0 * p.b + 1e-8;
    return sh.first_root(1, x, yc - span, yc + span, true);
}

inline FoldParabola build_fold_parabola(const MapParams& p, const Saddle& Q, const Box& window) {
    FoldParabola fp;
    fp.p = p;
    fp.q = Q.location;
    Vec2 vs = Q.dir_stable.unit();
    fp.ns = {-vs.y, vs.x};
    double x_c = std::sqrt((1.0 - Q.location.x) / p.a);
    fp.vertex_base = x_c - 1.0;

    // x-extent: shrink from the window edges until the shooting root exists
    double lo = window.xmin, hi = window.xmax;
    for (int i = 0; i < 24 && !fp.try_y_at_x(lo); ++i) lo += 0.04 * (window.xmax - window.xmin);
    for (int i = 0; i < 24 && !fp.try_y_at_x(hi); ++i) hi -= 0.04 * (window.xmax - window.xmin);
    if (!(hi > lo) || !fp.try_y_at_x(lo) || !fp.try_y_at_x(hi))
        throw std::runtime_error("build_fold_parabola: stable fold absent from window");
    fp.x_lo = lo;
    fp.x_hi = hi;
    return fp;
}

// ---- unstable sheets ----

struct SheetRef {
    const CurveView* view = nullptr;
    CurvePass pass;
};

// Passes of a stitched branch view through `win` that span at least
// [x_lo, x_hi].
inline std::vector<SheetRef> spanning_passes(const CurveView& view, const Box& win,
                                             double x_lo, double x_hi) {
    std::vector<SheetRef> out;
    for (const auto& pass : window_passes(view, win))
        if (pass.x_min <= x_lo && pass.x_max >= x_hi) out.push_back({&view, pass});
    return out;
}

inline SheetRef lowest_sheet(const std::vector<SheetRef>& sheets) {
    if (sheets.empty()) throw std::runtime_error("lowest_sheet: no spanning unstable pass in window");
    const SheetRef* best = &sheets.front();
    for (const auto& s : sheets)
        if (s.pass.y_mean < best->pass.y_mean) best = &s;
    return *best;
}

// Sheet whose arclength range contains s0 (the l^u selector). Falls back to
// the nearest pass when the offsets miss, which widens the paper's 1/100 arc
// to the full window crossing.
inline SheetRef sheet_at_arclength(const std::vector<SheetRef>& sheets, double s0) {
    if (sheets.empty()) throw std::runtime_error("sheet_at_arclength: no spanning unstable pass");
    const SheetRef* best = nullptr;
    double best_d = 1e300;
    for (const auto& s : sheets) {
        double d = 0.0;
        if (s0 < s.pass.s_begin) d = s.pass.s_begin - s0;
        else if (s0 > s.pass.s_end) d = s0 - s.pass.s_end;
        if (d < best_d) { best_d = d; best = &s; }
    }
    return *best;
}

// ---- gap functional ----

struct GapResult {
    double gap = 0.0;
    Vec2 where;
};

// Minimal vertical offset of the parabola over the sheet: positive when the
// parabola clears the sheet, negative (= -penetration at the vertex) once
// they cross.
inline GapResult fold_gap(const FoldParabola& par, const SheetRef& sheet, const Box& window) {
    double x_lo = std::max({par.x_min(), sheet.pass.x_min, window.xmin});
    double x_hi = std::min({par.x_max(), sheet.pass.x_max, window.xmax});
    if (!(x_hi > x_lo)) throw std::runtime_error("fold_gap: empty x overlap");
    double span = x_hi - x_lo;
    x_lo += 1e-9 * span;
    x_hi -= 1e-9 * span;

    auto d = [&](double x) {
        return par.y_at_x(x) - pass_y_at_x(*sheet.view, sheet.pass, x);
    };

    const int N = 64;
    double best = 1e300, best_x = x_lo;
    for (int i = 0; i <= N; ++i) {
        double x = x_lo + (x_hi - x_lo) * double(i) / N;
        double v = d(x);
        if (v < best) { best = v; best_x = x; }
    }
    double w = (x_hi - x_lo) / N;
    double a = std::max(x_lo, best_x - w), b = std::min(x_hi, best_x + w);
    double x_star = golden_min(d, a, b, 90);
    double g = d(x_star);
    if (g > best) { g = best; x_star = best_x; }

    GapResult r;
    r.gap = g;
    double yp = par.y_at_x(x_star);
    double yu = pass_y_at_x(*sheet.view, sheet.pass, x_star);
    r.where = {x_star, 0.5 * (yp + yu)};
    return r;
}

// ---- tangency bisections ----

namespace detail {

enum class SheetSelect { Bottom, EllU };

inline GapResult tangency_gap(const MapParams& p, const TangencyOptions& opt, SheetSelect sel) {
    auto fps = fixed_points(p);
    FoldParabola par = build_fold_parabola(p, fps.Q, opt.window);

    // probe span: where the parabola lives in the window
    double px0 = std::max(par.x_min(), opt.window.xmin);
    double px1 = std::min(par.x_max(), opt.window.xmax);
    double x_lo = px0 + 0.05 * (px1 - px0);
    double x_hi = px1 - 0.05 * (px1 - px0);

    Box sheet_win = opt.window;
    bool det_neg = (p.variant == Variant::OrientationReversing);

    if (sel == SheetSelect::Bottom) {
        // a*: det<0 pairs W^s(Q) with W^u(P), det>0 with W^u(Q)
        const Saddle& s = det_neg ? fps.P : fps.Q;
        Branch bu(p, s, Stability::Unstable, psi_oriented(s.dir_unstable),
                  opt.unstable_arclength, opt.grow);
        CurveView view = branch_view(bu);
        auto sheets = spanning_passes(view, sheet_win, x_lo, x_hi);
        return fold_gap(par, lowest_sheet(sheets), opt.window);
    }
    // a**: l^u lives on W^u(Q) at arclength ~1 (det>0) or ~3 (det<0)
    Branch bu(p, fps.Q, Stability::Unstable, psi_oriented(fps.Q.dir_unstable),
              opt.unstable_arclength, opt.grow);
    CurveView view = branch_view(bu);
    auto sheets = spanning_passes(view, sheet_win, x_lo, x_hi);
    double s0 = det_neg ? 3.0 : 1.0;
    return fold_gap(par, sheet_at_arclength(sheets, s0), opt.window);
}

inline TangencyReport tangency_bisection(double b, Variant variant, const TangencyOptions& opt,
                                         SheetSelect sel) {
    auto gap_at = [&](double a) {
        return tangency_gap(MapParams::henon(a, b, variant), opt, sel);
    };
    double lo = opt.bracket_lo, hi = opt.bracket_hi;
    double glo = gap_at(lo).gap;
    double ghi = gap_at(hi).gap;
    if (!(glo > 0.0 && ghi < 0.0))
        throw std::runtime_error("tangency_bisection: no sign change in bracket [" +
                                 std::to_string(lo) + ", " + std::to_string(hi) + "]");
    while (hi - lo > opt.a_tolerance) {
        double mid = 0.5 * (lo + hi);
        if (mid <= lo || mid >= hi) break;
        double g = gap_at(mid).gap;
        if (g > 0.0) lo = mid;
        else hi = mid;
    }
    double a_star = 0.5 * (lo + hi);
    GapResult g = gap_at(a_star);

    TangencyReport rep;
    rep.parameter = a_star;
    rep.point = g.where;
    rep.gap = g.gap;
    rep.stable_of = SaddleLabel::Q;
    rep.unstable_of =
        (sel == SheetSelect::Bottom && variant == Variant::OrientationReversing)
            ? SaddleLabel::P
            : SaddleLabel::Q;
    return rep;
}

}  // namespace detail

// First-bifurcation parameter: the last tangency of the descending W^s(Q)
// fold with the unstable band (its bottom sheet); beyond it the nonwandering
// set is a horseshoe.
inline TangencyReport find_a_star(double b, Variant variant, TangencyOptions opt = {}) {
    return detail::tangency_bisection(b, variant, opt, detail::SheetSelect::Bottom);
}

// Secondary threshold: tangency of f^{-2}(W^s_loc(Q)) with the l^u sheet.
inline TangencyReport find_a_star_star(double b, Variant variant, TangencyOptions opt = {}) {
    return detail::tangency_bisection(b, variant, opt, detail::SheetSelect::EllU);
}

// Gap for a given a against the a*-sheet (exposed for monotonicity checks and
// the G-membership test).
inline GapResult a_star_gap(const MapParams& p, TangencyOptions opt = {}) {
    return detail::tangency_gap(p, opt, detail::SheetSelect::Bottom);
}

inline GapResult ell_u_gap(const MapParams& p, TangencyOptions opt = {}) {
    return detail::tangency_gap(p, opt, detail::SheetSelect::EllU);
}

// ---- spec-facing signed gap on plain curves ----

// Signed clearance between two curves restricted to a window, treating each
// as a graph over x there. Positive: disjoint, value = minimal |vertical
// offset|. Negative: they cross; value = -(max |offset| between the outermost
// crossings), which at a line/parabola crossing is the penetration at the
// vertex. Ties broken toward smaller x.
inline GapResult signed_gap(const ManifoldCurve& cs, const ManifoldCurve& cu, const Box& window) {
    auto clip = [&](const ManifoldCurve& c) {
        std::vector<Vec2> pts;
        for (const auto& z : c.points)
            if (window.contains(z)) pts.push_back(z);
        if (pts.size() < 2) throw std::runtime_error("signed_gap: window empty of curve points");
        return pts;
    };
    auto s_pts = clip(cs);
    auto u_pts = clip(cu);

    auto y_at = [](const std::vector<Vec2>& pts, double x) -> std::optional<double> {
        for (std::size_t i = 0; i + 1 < pts.size(); ++i) {
            double x0 = pts[i].x, x1 = pts[i + 1].x;
            if ((x0 - x) * (x1 - x) <= 0.0 && x0 != x1)
                return pts[i].y + (pts[i + 1].y - pts[i].y) * (x - x0) / (x1 - x0);
        }
        return std::nullopt;
    };

    double x_lo = std::max(std::min(s_pts.front().x, s_pts.back().x),
                           std::min(u_pts.front().x, u_pts.back().x));
    double x_hi = std::min(std::max(s_pts.front().x, s_pts.back().x),
                           std::max(u_pts.front().x, u_pts.back().x));
    if (!(x_hi > x_lo)) throw std::runtime_error("signed_gap: curves do not overlap in x");

    const int N = 512;
    std::vector<double> xs, ds;
    for (int i = 0; i <= N; ++i) {
        double x = x_lo + (x_hi - x_lo) * double(i) / N;
        auto ys = y_at(s_pts, x);
        auto yu = y_at(u_pts, x);
        if (ys && yu) { xs.push_back(x); ds.push_back(*ys - *yu); }
    }
    if (xs.size() < 2) throw std::runtime_error("signed_gap: window empty of curve points");

    bool any_pos = false, any_neg = false;
    for (double d : ds) { any_pos |= d > 0; any_neg |= d < 0; }

    GapResult r;
    if (!(any_pos && any_neg)) {
        std::size_t best = 0;
        for (std::size_t i = 1; i < ds.size(); ++i)
            if (std::abs(ds[i]) < std::abs(ds[best])) best = i;
        r.gap = std::abs(ds[best]);
        r.where = {xs[best], *y_at(s_pts, xs[best])};
        return r;
    }
    // crossing: outermost sign changes, maximal |d| in between
    std::size_t first = 0, last = ds.size() - 1;
    while (first + 1 < ds.size() && (ds[first] > 0) == (ds[first + 1] > 0)) ++first;
    while (last > 0 && (ds[last] > 0) == (ds[last - 1] > 0)) --last;
    std::size_t best = first;
    for (std::size_t i = first; i <= last; ++i)
        if (std::abs(ds[i]) > std::abs(ds[best])) best = i;
    r.gap = -std::abs(ds[best]);
    r.where = {xs[best], *y_at(s_pts, xs[best])};
    return r;
}

// ---- the rectangle R ----

// R is the unique rectangle containing the nonwandering set, bordered by two
// curves in W^u(Q) (det>0) or W^u(P) (det<0) and two in W^s(Q). alpha_0^- is
// the stable side through Q, alpha_0^+ the one near x = +x_c with
// f(alpha_0^+) inside alpha_0^-.
struct RectangleR {
    ManifoldCurve alpha0_minus, alpha0_plus;  // stable sides
    ManifoldCurve top, bottom;                // unstable sides
    Vec2 corners[4];                          // TL, TR, BR, BL
    double f_alpha_check = 0.0;               // max dist of f(alpha_0^+) from alpha_0^-
};

inline RectangleR rectangle_R(const MapParams& p, GrowOptions grow = {}) {
    auto fps = fixed_points(p);
    const Saddle& Q = fps.Q;
    double x_c = std::sqrt((1.0 - Q.location.x) / p.a);

    // stable side graphs x(y): coarse two-step shot (wide validity window),
    // then a six-step refinement to kill the eigenline-curvature bias
    StableShoot loc = stable_shoot_for(p, Q, 2);
    StableShoot arm = stable_shoot_for(p, Q, 2);
    double w = std::max(0.05, 10.0 * p.b);
    auto x_minus_at_y = [&](double y) {
        auto r = loc.first_root(0, y, Q.location.x - w, Q.location.x + w, false);
        if (r) r = loc.refine_root(0, y, *r, 4, 1e-4);
        if (r) r = loc.refine_root(0, y, *r, 6, 1e-7);
        if (!r) throw std::runtime_error("rectangle_R: alpha_0^- not found");
        return *r;
    };
    auto x_plus_at_y = [&](double y) {
        auto r = arm.first_root(0, y, x_c - w, x_c + w, true);
        if (r) r = arm.refine_root(0, y, *r, 4, 1e-4);
        if (r) r = arm.refine_root(0, y, *r, 6, 1e-7);
        if (!r) throw std::runtime_error("rectangle_R: alpha_0^+ not found");
        return *r;
    };

    // unstable sides: extreme spanning passes of the designated manifold
    const Saddle& us =
        (p.variant == Variant::OrientationReversing) ? fps.P : fps.Q;
    Branch bu(p, us, Stability::Unstable, psi_oriented(us.dir_unstable), 4.8, grow);
    CurveView view = branch_view(bu);
    Box wide{Q.location.x - 0.05, x_c + 0.05, -8.0 * p.b, 8.0 * p.b};
    auto sheets = spanning_passes(view, wide, Q.location.x + 0.08, x_c - 0.08);
    if (sheets.size() < 2)
        throw std::runtime_error("rectangle_R: unstable side identification ambiguous");
    const SheetRef* top = &sheets.front();
    const SheetRef* bot = &sheets.front();
    for (const auto& s : sheets) {
        if (s.pass.y_mean > top->pass.y_mean) top = &s;
        if (s.pass.y_mean < bot->pass.y_mean) bot = &s;
    }

    RectangleR R;
    auto corner = [&](const SheetRef& sheet, bool left) {
        double x = left ? Q.location.x : x_c;
        for (int i = 0; i < 6; ++i) {
            double y = pass_y_at_x(*sheet.view, sheet.pass,
                                   std::clamp(x, sheet.pass.x_min, sheet.pass.x_max));
            x = left ? x_minus_at_y(y) : x_plus_at_y(y);
        }
        return Vec2{x, pass_y_at_x(*sheet.view, sheet.pass,
                                   std::clamp(x, sheet.pass.x_min, sheet.pass.x_max))};
    };
    R.corners[0] = corner(*top, true);
    R.corners[1] = corner(*top, false);
    R.corners[2] = corner(*bot, false);
    R.corners[3] = corner(*bot, true);

    auto sheet_curve = [&](const SheetRef& s) {
        ManifoldCurve c;
        c.saddle_label = us.label;
        c.stability = Stability::Unstable;
        const auto& nodes = s.view->nodes;
        for (std::size_t i = s.pass.first; i <= s.pass.last; ++i) c.points.push_back(nodes[i].z);
        c.arclength.resize(c.points.size(), 0.0);
        for (std::size_t i = 1; i < c.points.size(); ++i)
            c.arclength[i] = c.arclength[i - 1] + dist(c.points[i], c.points[i - 1]);
        return c;
    };
    R.top = sheet_curve(*top);
    R.bottom = sheet_curve(*bot);

    auto side_curve = [&](auto&& x_at_y, double y0, double y1) {
        ManifoldCurve c;
        c.saddle_label = SaddleLabel::Q;
        c.stability = Stability::Stable;
        int n = 120;
        for (int i = 0; i <= n; ++i) {
            double y = y0 + (y1 - y0) * double(i) / n;
            c.points.push_back({x_at_y(y), y});
        }
        c.arclength.resize(c.points.size(), 0.0);
        for (std::size_t i = 1; i < c.points.size(); ++i)
            c.arclength[i] = c.arclength[i - 1] + dist(c.points[i], c.points[i - 1]);
        return c;
    };
    double pad_m = 0.02 * std::abs(R.corners[0].y - R.corners[3].y);
    R.alpha0_minus = side_curve(x_minus_at_y, R.corners[3].y - pad_m, R.corners[0].y + pad_m);
    R.alpha0_plus = side_curve(x_plus_at_y, R.corners[2].y - pad_m, R.corners[1].y + pad_m);

    // f(alpha_0^+) lands inside alpha_0^-
    double worst = 0.0;
    for (const auto& z : R.alpha0_plus.points) {
        Vec2 fz = henon_apply(p, z);
        worst = std::max(worst, std::abs(fz.x - x_minus_at_y(fz.y)));
    }
    R.f_alpha_check = worst;
    return R;
}

inline ManifoldCurve grow_unstable(const MapParams& p, const Saddle& s, double target_arclength,
                                   GrowOptions opt = {}) {
    Branch br(p, s, Stability::Unstable, psi_oriented(s.dir_unstable), target_arclength, opt);
    return br.to_manifold_curve();
}

inline ManifoldCurve grow_stable(const MapParams& p, const Saddle& s, double target_arclength,
                                 GrowOptions opt = {}) {
    Branch br(p, s, Stability::Stable, s.dir_stable.unit(), target_arclength, opt);
    return br.to_manifold_curve();
}

}  // namespace henonlab
