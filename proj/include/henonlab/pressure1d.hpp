#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "henonlab/map.hpp"

namespace henonlab {

// One fixed point of T_a^n. Multipliers reach 4^20 and beyond, so the Birkhoff
// product is accumulated as log|Lambda| with the sign kept separately.
struct PeriodicOrbit1D {
    int period = 0;
    double representative = 0.0;   // x with T^n(x) = x
    double log_abs_multiplier = 0.0;
    int multiplier_sign = 1;
    std::string itinerary;         // word over {L, R}, L: x < 0

    double multiplier() const { return multiplier_sign * std::exp(log_abs_multiplier); }
};

enum class PressureMethod { ClosedForm, OrbitSum, ShiftLowerBound };

inline const char* pressure_method_name(PressureMethod m) {
    switch (m) {
        case PressureMethod::ClosedForm: return "closed_form";
        case PressureMethod::OrbitSum: return "orbit_sum";
        case PressureMethod::ShiftLowerBound: return "shift_lower_bound";
    }
    return "?";
}

// Samples of t -> pressure estimate with provenance. error_proxy holds the gap
// between the last two computed depths where available, else 0.
struct PressureCurve {
    std::vector<double> t_grid;
    std::vector<double> values;
    PressureMethod method = PressureMethod::OrbitSum;
    int depth = 0;             // orbit period n or shift size q
    std::vector<double> error_proxy;
};

namespace detail {
inline void orbit_symbols(const std::vector<double>& pts, std::string& out) {
    out.clear();
    for (double x : pts) out.push_back(x < 0.0 ? 'L' : 'R');
}
}  // namespace detail

// All 2^n fixed points of T_2^n through the angle-doubling semiconjugacy
// x = -cos(theta). 2^n theta = theta (mod 2pi) gives theta = 2 pi k/(2^n - 1);
// 2^n theta = -theta gives theta = 2 pi k/(2^n + 1). The two families overlap
// only at theta = 0 (the fixed point x = -1).
inline std::vector<PeriodicOrbit1D> t2_periodic_points(int n) {
    if (n < 1 || n > 24) throw std::invalid_argument("t2_periodic_points: need 1 <= n <= 24");
    const std::int64_t pow2n = std::int64_t(1) << n;
    std::vector<PeriodicOrbit1D> out;
    out.reserve(std::size_t(pow2n));

    std::vector<double> orbit(static_cast<std::size_t>(n));
    auto push_point = [&](double theta) {
        PeriodicOrbit1D po;
        po.period = n;
        po.representative = -std::cos(theta);
        double th = theta;
        double log_abs = 0.0;
        int sign = 1;
        for (int j = 0; j < n; ++j) {
            double xj = -std::cos(th);
            orbit[std::size_t(j)] = xj;
            double d = -4.0 * xj;
            log_abs += std::log(std::abs(d));
            if (d < 0.0) sign = -sign;
            th *= 2.0;
        }
        po.log_abs_multiplier = log_abs;
        po.multiplier_sign = sign;
        detail::orbit_symbols(orbit, po.itinerary);
        out.push_back(std::move(po));
    };

    const std::int64_t N = pow2n - 1;
    for (std::int64_t k = 0; 2 * k <= N - 1; ++k)
        push_point(2.0 * M_PI * double(k) / double(N));
    const std::int64_t M = pow2n + 1;
    for (std::int64_t k = 1; 2 * k <= M - 1; ++k)
        push_point(2.0 * M_PI * double(k) / double(M));

    return out;
}

// One periodic point per itinerary of length n, for the hyperbolic regime
// a >= 2. The point is located by running the two contracting inverse branches
// x -> +-sqrt((1 - x)/a) along the reversed itinerary until the cycle map
// converges.
inline std::vector<PeriodicOrbit1D> quad_periodic_points(double a, int n) {
    if (!(a >= 2.0)) throw std::invalid_argument("quad_periodic_points: need a >= 2");
    if (n < 1 || n > 20) throw std::invalid_argument("quad_periodic_points: need 1 <= n <= 20");

    const std::uint32_t words = std::uint32_t(1) << n;
    std::vector<PeriodicOrbit1D> out;
    out.reserve(words);

    std::vector<double> orbit(static_cast<std::size_t>(n));
    for (std::uint32_t w = 0; w < words; ++w) {
        // bit j of w = symbol of x_j; bit set = R (x_j > 0)
        double z = 0.0;
        double prev = 1e9;
        int it = 0;
        for (; it < 200; ++it) {
            double cur = z;
            for (int j = n - 1; j >= 0; --j) {
                double s = (w >> j) & 1u ? 1.0 : -1.0;
                cur = s * std::sqrt((1.0 - cur) / a);
            }
            if (std::abs(cur - prev) <= 1e-13) { z = cur; break; }
            prev = cur;
            z = cur;
        }
        if (it >= 200) throw std::runtime_error("quad_periodic_points: no convergence after 200 iterations");

        PeriodicOrbit1D po;
        po.period = n;
        // reconstruct the orbit by one more stable pullback sweep
        double cur = z;
        for (int j = n - 1; j >= 0; --j) {
            double s = (w >> j) & 1u ? 1.0 : -1.0;
            cur = s * std::sqrt((1.0 - cur) / a);
            orbit[std::size_t(j)] = cur;
        }
        po.representative = orbit[0];
        double log_abs = 0.0;
        int sign = 1;
        for (int j = 0; j < n; ++j) {
            double d = -2.0 * a * orbit[std::size_t(j)];
            log_abs += std::log(std::abs(d));
            if (d < 0.0) sign = -sign;
        }
        po.log_abs_multiplier = log_abs;
        po.multiplier_sign = sign;
        detail::orbit_symbols(orbit, po.itinerary);
        out.push_back(std::move(po));
    }
    return out;
}

// (1/n) log Z_n(t) with Z_n(t) = sum over Fix(T^n) of |Lambda|^{-t},
// evaluated as a log-sum-exp.
inline double orbit_sum_pressure(const std::vector<PeriodicOrbit1D>& points, double t, int n) {
    if (points.empty()) throw std::invalid_argument("orbit_sum_pressure: empty orbit list");
    if (n < 1) throw std::invalid_argument("orbit_sum_pressure: n >= 1");
    double m = -std::numeric_limits<double>::infinity();
    for (const auto& po : points) m = std::max(m, -t * po.log_abs_multiplier);
    double acc = 0.0;
    for (const auto& po : points) acc += std::exp(-t * po.log_abs_multiplier - m);
    return (m + std::log(acc)) / double(n);
}

// Piecewise pressure of the Chebyshev map: -t log4 for t <= -1 and
// (1 - t) log2 for t > -1; the branches cross at t = -1.
inline double t2_pressure_closed_form(double t) {
    return std::max(-t * std::log(4.0), (1.0 - t) * std::log(2.0));
}

inline PressureCurve t2_closed_form_curve(double t_min, double t_max, double h) {
    PressureCurve c;
    c.method = PressureMethod::ClosedForm;
    c.depth = 0;
    for (double t = t_min; t <= t_max + 1e-12; t += h) {
        c.t_grid.push_back(t);
        c.values.push_back(t2_pressure_closed_form(t));
        c.error_proxy.push_back(0.0);
    }
    return c;
}

inline PressureCurve orbit_sum_curve(const std::vector<PeriodicOrbit1D>& points, int n,
                                     double t_min, double t_max, double h,
                                     const std::vector<PeriodicOrbit1D>* points_prev = nullptr,
                                     int n_prev = 0) {
    PressureCurve c;
    c.method = PressureMethod::OrbitSum;
    c.depth = n;
    for (double t = t_min; t <= t_max + 1e-12; t += h) {
        double v = orbit_sum_pressure(points, t, n);
        c.t_grid.push_back(t);
        c.values.push_back(v);
        double proxy = 0.0;
        if (points_prev && n_prev > 0)
            proxy = std::abs(v - orbit_sum_pressure(*points_prev, t, n_prev));
        c.error_proxy.push_back(proxy);
    }
    return c;
}

// Kink locator. Uses the second central difference at a fixed stencil width
// W = max(0.2, h): D2(t) = v(t - W) - 2 v(t) + v(t + W), and reports the
// maximizing grid point when the peak exceeds 0.5 * W * (log4 - log2). At an
// exact slope jump of size log4 - log2 the stencil value is the full
// W * (log4 - log2); a smooth curve of curvature kappa contributes only
// W^2 * kappa, which stays under the threshold for kappa < 1.7. Finite-n
// smoothing of the T_2 kink spreads the jump over width ~ 1/(n log2), well
// inside W for the depths used here, so the jump is still captured.
inline std::optional<double> detect_kink(const PressureCurve& curve, double stencil = 0.2) {
    const auto& ts = curve.t_grid;
    const auto& vs = curve.values;
    if (ts.size() < 3) throw std::invalid_argument("detect_kink: need at least 3 grid points");
    double h = ts[1] - ts[0];
    for (std::size_t i = 1; i + 1 < ts.size(); ++i) {
        double hi = ts[i + 1] - ts[i];
        if (std::abs(hi - h) > 1e-9 * std::max(1.0, std::abs(h)))
            throw std::invalid_argument("detect_kink: grid not uniform");
    }
    if (h > 0.05 + 1e-12) throw std::invalid_argument("detect_kink: grid too coarse (h > 0.05)");

    std::size_t m = std::size_t(std::max(1.0, std::round(stencil / h)));
    if (2 * m + 1 > ts.size()) m = (ts.size() - 1) / 2;
    double W = double(m) * h;

    double best = 0.0;
    std::size_t best_i = m;
    for (std::size_t i = m; i + m < vs.size(); ++i) {
        double d = vs[i - m] - 2.0 * vs[i] + vs[i + m];
        if (d > best) { best = d; best_i = i; }
    }
    double threshold = 0.5 * W * (std::log(4.0) - std::log(2.0));
    if (best > threshold) return ts[best_i];
    return std::nullopt;
}

}  // namespace henonlab
