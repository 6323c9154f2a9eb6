#pragma once

#include <cmath>
#include <limits>
#include <stdexcept>

namespace henonlab {

struct Vec2 {
    double x = 0.0;
    double y = 0.0;

    Vec2() = default;
    Vec2(double x_, double y_) : x(x_), y(y_) {}

    Vec2 operator+(const Vec2& o) const { return {x + o.x, y + o.y}; }
    Vec2 operator-(const Vec2& o) const { return {x - o.x, y - o.y}; }
    Vec2 operator*(double s) const { return {x * s, y * s}; }
    Vec2 operator/(double s) const { return {x / s, y / s}; }
    Vec2& operator+=(const Vec2& o) { x += o.x; y += o.y; return *this; }

    double norm() const { return std::hypot(x, y); }
    double norm2() const { return x * x + y * y; }
    bool finite() const { return std::isfinite(x) && std::isfinite(y); }
};

inline Vec2 operator*(double s, const Vec2& v) { return v * s; }
inline double dot(const Vec2& u, const Vec2& v) { return u.x * v.x + u.y * v.y; }
inline double cross(const Vec2& u, const Vec2& v) { return u.x * v.y - u.y * v.x; }
inline double dist(const Vec2& u, const Vec2& v) { return (u - v).norm(); }
inline Vec2 normalized(const Vec2& v) {
    double n = v.norm();
    if (n == 0.0) throw std::invalid_argument("normalized: zero vector");
    return v / n;
}

// Unsigned angle between the lines spanned by u and v, in [0, pi/2].
inline double line_angle(const Vec2& u, const Vec2& v) {
    double c = std::abs(dot(u, v));
    double s = std::abs(cross(u, v));
    return std::atan2(s, c);
}

// Unsigned angle between vectors, in [0, pi].
inline double vec_angle(const Vec2& u, const Vec2& v) {
    return std::atan2(std::abs(cross(u, v)), dot(u, v));
}

struct Mat2 {
    // row-major: [[a00 a01], [a10 a11]]
    double a00 = 0, a01 = 0, a10 = 0, a11 = 0;

    Vec2 apply(const Vec2& v) const { return {a00 * v.x + a01 * v.y, a10 * v.x + a11 * v.y}; }
    double det() const { return a00 * a11 - a01 * a10; }
    double trace() const { return a00 + a11; }

    Mat2 mul(const Mat2& o) const {
        return {a00 * o.a00 + a01 * o.a10, a00 * o.a01 + a01 * o.a11,
                a10 * o.a00 + a11 * o.a10, a10 * o.a01 + a11 * o.a11};
    }

    Mat2 inverse() const {
        double d = det();
        if (d == 0.0) throw std::runtime_error("Mat2: singular");
        return {a11 / d, -a01 / d, -a10 / d, a00 / d};
    }
};

struct Box {
    double xmin, xmax, ymin, ymax;

    bool contains(const Vec2& z) const {
        return z.x >= xmin && z.x <= xmax && z.y >= ymin && z.y <= ymax;
    }
    double width() const { return xmax - xmin; }
    double height() const { return ymax - ymin; }
    Box padded(double m) const { return {xmin - m, xmax + m, ymin - m, ymax + m}; }
};

// Direction of a line in the tangent plane, stored as an angle in [0, pi).
// slope(v) = |eta|/|xi| per the nearly-horizontal-curve convention; a vertical
// line (angle = pi/2) has infinite slope.
struct TangentDir {
    double angle = 0.0;

    TangentDir() = default;
    explicit TangentDir(double ang) {
        double a = std::fmod(ang, M_PI);
        if (a < 0) a += M_PI;
        angle = a;
    }

    static TangentDir of_vector(const Vec2& v) {
        if (v.x == 0.0 && v.y == 0.0)
            throw std::invalid_argument("TangentDir: zero vector");
        return TangentDir(std::atan2(v.y, v.x));
    }

    Vec2 unit() const { return {std::cos(angle), std::sin(angle)}; }

    double slope() const {
        double c = std::cos(angle);
        if (c == 0.0) return std::numeric_limits<double>::infinity();
        return std::abs(std::sin(angle) / c);
    }
};

}  // namespace henonlab
