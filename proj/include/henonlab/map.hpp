#pragma once

#include <cmath>
#include <stdexcept>
#include <string>

#include "henonlab/geometry.hpp"

namespace henonlab {

using PlanePoint = Vec2;

enum class Variant { OrientationReversing, OrientationPreserving, OneDimensional };

inline const char* variant_name(Variant v) {
    switch (v) {
        case Variant::OrientationReversing: return "reversing";
        case Variant::OrientationPreserving: return "preserving";
        case Variant::OneDimensional: return "one-dimensional";
    }
    return "?";
}

// One member of the Henon-like family (1 - a x^2, 0) + b * Phi(a, b, x, y).
// Two concrete Phi choices are shipped, picked by the determinant sign they
// realize:
//   reversing : (x, y) -> (1 - a x^2 + y,  b x),  det Df = -b
//   preserving: (x, y) -> (1 - a x^2 + y, -b x),  det Df = +b
// b = 0 degenerates to the quadratic family T_a(x) = 1 - a x^2.
struct MapParams {
    double a = 2.0;
    double b = 0.0;
    Variant variant = Variant::OneDimensional;

    static constexpr double a_min = 1.8;
    static constexpr double a_max = 2.4;
    static constexpr double b_min = 1e-5;
    static constexpr double b_max = 1e-2;

    static MapParams henon(double a, double b, Variant v) {
        if (v == Variant::OneDimensional)
            throw std::invalid_argument("MapParams::henon: b > 0 forbids OneDimensional");
        if (!(b >= b_min && b <= b_max))
            throw std::invalid_argument("MapParams::henon: b outside working window [1e-5, 1e-2]");
        if (!(a >= a_min && a <= a_max))
            throw std::invalid_argument("MapParams::henon: a outside working window [1.8, 2.4]");
        return MapParams{a, b, v};
    }

    static MapParams quadratic(double a) {
        if (!(a > -0.25))
            throw std::invalid_argument("MapParams::quadratic: need a > -1/4");
        return MapParams{a, 0.0, Variant::OneDimensional};
    }

    bool two_dimensional() const { return variant != Variant::OneDimensional; }

    // Sign of the second component of b*Phi: +b x for reversing, -b x for preserving.
    double phi_sign() const { return variant == Variant::OrientationReversing ? 1.0 : -1.0; }

    MapParams with_a(double a_new) const { return MapParams{a_new, b, variant}; }
};

inline double quad_apply(double a, double x) { return 1.0 - a * x * x; }
inline double quad_derivative(double a, double x) { return -2.0 * a * x; }

inline PlanePoint henon_apply(const MapParams& p, const PlanePoint& z) {
    return {1.0 - p.a * z.x * z.x + z.y, p.phi_sign() * p.b * z.x};
}

inline Mat2 henon_jacobian(const MapParams& p, const PlanePoint& z) {
    return {-2.0 * p.a * z.x, 1.0, p.phi_sign() * p.b, 0.0};
}

inline PlanePoint henon_inverse(const MapParams& p, const PlanePoint& z) {
    if (!(p.b > 0.0)) throw std::invalid_argument("henon_inverse: requires b > 0");
    double x = p.phi_sign() * z.y / p.b;
    return {x, z.x - 1.0 + p.a * x * x};
}

inline Mat2 henon_inverse_jacobian(const MapParams& p, const PlanePoint& z) {
    double s = p.phi_sign();
    double x = s * z.y / p.b;
    return {0.0, s / p.b, 1.0, 2.0 * p.a * x * s / p.b};
}

inline PlanePoint henon_iterate(const MapParams& p, PlanePoint z, int n) {
    for (; n > 0; --n) z = henon_apply(p, z);
    for (; n < 0; ++n) z = henon_inverse(p, z);
    return z;
}

enum class SaddleLabel { P, Q };

// Fixed saddle with eigendata. For b > 0 both fixed points of the default
// variants are saddles; lambda^u(delta_Q) = log|eig_unstable of Q|.
struct Saddle {
    PlanePoint location;
    double eig_unstable = 0.0;
    double eig_stable = 0.0;
    TangentDir dir_unstable;
    TangentDir dir_stable;
    SaddleLabel label = SaddleLabel::Q;

    double lambda_u() const { return std::log(std::abs(eig_unstable)); }
};

struct FixedPoints {
    Saddle P;
    Saddle Q;
};

// Solves a x^2 + (1 -+ b) x - 1 = 0 for the fixed points and the 2x2
// characteristic polynomial lambda^2 + 2 a x lambda -+ b = 0 for eigendata.
// Q is the root near -1, P the one near 1/2.
inline FixedPoints fixed_points(const MapParams& p) {
    double c;  // linear coefficient of the fixed-point quadratic
    switch (p.variant) {
        case Variant::OrientationReversing: c = 1.0 - p.b; break;
        case Variant::OrientationPreserving: c = 1.0 + p.b; break;
        default: c = 1.0; break;
    }
    double disc = c * c + 4.0 * p.a;
    if (disc <= 0.0) throw std::runtime_error("fixed_points: no real fixed points (discriminant <= 0)");
    double sq = std::sqrt(disc);
    double xQ = (-c - sq) / (2.0 * p.a);
    double xP = (-c + sq) / (2.0 * p.a);

    auto make = [&](double x, SaddleLabel label) {
        Saddle s;
        s.label = label;
        if (p.variant == Variant::OneDimensional) {
            s.location = {x, 0.0};
            s.eig_unstable = quad_derivative(p.a, x);
            s.eig_stable = 0.0;  // degenerate 1-D limit: no stable eigendatum
            s.dir_unstable = TangentDir(0.0);
            s.dir_stable = TangentDir(M_PI / 2.0);
            return s;
        }
        double det = (p.variant == Variant::OrientationReversing) ? -p.b : p.b;
        double y = p.phi_sign() * p.b * x;
        s.location = {x, y};
        double tr = -2.0 * p.a * x;
        double d2 = tr * tr / 4.0 - det;
        if (d2 <= 0.0) throw std::runtime_error("fixed_points: complex multipliers (not a saddle)");
        double r = std::sqrt(d2);
        double l1 = tr / 2.0 + r;
        double l2 = tr / 2.0 - r;
        if (std::abs(l1) < std::abs(l2)) std::swap(l1, l2);
        s.eig_unstable = l1;
        s.eig_stable = l2;
        // eigenvector of lambda: (1, 2 a x + lambda), using 2 a x + lambda = -det/lambda
        s.dir_unstable = TangentDir::of_vector({1.0, -det / l1});
        s.dir_stable = TangentDir::of_vector({1.0, -det / l2});
        return s;
    };

    return {make(xP, SaddleLabel::P), make(xQ, SaddleLabel::Q)};
}

}  // namespace henonlab
