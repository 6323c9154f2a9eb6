#include "catch_amalgamated.hpp"

#include <cmath>
#include <random>

#include "henonlab/map.hpp"
#include "oracles.hpp"

using namespace henonlab;

TEST_CASE("quad_apply basics") {
    CHECK(quad_apply(2.0, 0.0) == 1.0);
    CHECK(quad_apply(2.0, 0.5) == 0.5);
    CHECK(quad_apply(2.0, -1.0) == -1.0);
    CHECK(quad_derivative(2.0, -1.0) == 4.0);
}

TEST_CASE("henon_apply at the origin and the b->0 limit") {
    auto p = MapParams::henon(2.0, 1e-3, Variant::OrientationReversing);
    auto z = henon_apply(p, {0.0, 0.0});
    CHECK(z.x == 1.0);
    CHECK(z.y == 0.0);

    // first coordinate is 1 - a x^2 + y for both variants
    auto q = MapParams::henon(2.0, 1e-3, Variant::OrientationPreserving);
    Vec2 w{0.3, -0.2};
    CHECK(henon_apply(p, w).x == Catch::Approx(1.0 - 2.0 * 0.09 - 0.2).margin(1e-15));
    CHECK(henon_apply(q, w).x == henon_apply(p, w).x);
    CHECK(henon_apply(q, w).y == -henon_apply(p, w).y);

    // y-range shrinks under iteration as b -> 0: |y_n| <= b * sup|x|
    for (double b : {1e-2, 1e-3, 1e-4}) {
        auto pb = MapParams::henon(2.0, b, Variant::OrientationReversing);
        Vec2 u{0.1, 0.0};
        double ymax = 0.0;
        for (int i = 0; i < 50; ++i) {
            u = henon_apply(pb, u);
            if (!(std::abs(u.x) < 3.0)) break;
            ymax = std::max(ymax, std::abs(u.y));
        }
        CHECK(ymax <= b * 3.0);
    }
}

TEST_CASE("henon_inverse composes to the identity on [-2,2]^2") {
    std::mt19937_64 rng(20240811);
    std::uniform_real_distribution<double> U(-2.0, 2.0);
    for (auto v : {Variant::OrientationReversing, Variant::OrientationPreserving}) {
        auto p = MapParams::henon(2.0, 1e-3, v);
        for (int i = 0; i < 1000; ++i) {
            Vec2 z{U(rng), U(rng)};
            Vec2 back = henon_inverse(p, henon_apply(p, z));
            CHECK(dist(back, z) < 1e-12);
        }
        // forward round trip, sampled inside the invariant band |v| <= 2b
        // (x = v/b is ill-conditioned for v outside the band)
        std::uniform_real_distribution<double> V(-2.0 * p.b, 2.0 * p.b);
        for (int i = 0; i < 1000; ++i) {
            Vec2 z{U(rng), V(rng)};
            Vec2 fwd = henon_apply(p, henon_inverse(p, z));
            CHECK(dist(fwd, z) < 1e-12);
        }
    }
}

TEST_CASE("henon_jacobian entries, determinant, and inverse determinant") {
    auto p = MapParams::henon(2.0, 1e-3, Variant::OrientationReversing);
    Mat2 J = henon_jacobian(p, {-1.0, 0.0});
    CHECK(J.a00 == Catch::Approx(4.0));
    CHECK(J.a01 == 1.0);
    CHECK(J.a10 == Catch::Approx(1e-3));
    CHECK(J.a11 == 0.0);

    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> U(-2.0, 2.0);
    for (int i = 0; i < 100; ++i) {
        Vec2 z{U(rng), U(rng)};
        CHECK(henon_jacobian(p, z).det() == Catch::Approx(-1e-3).epsilon(1e-12));
        CHECK(henon_inverse_jacobian(p, z).det() == Catch::Approx(-1.0 / 1e-3).epsilon(1e-10));
        auto q = MapParams::henon(2.1, 5e-3, Variant::OrientationPreserving);
        CHECK(henon_jacobian(q, z).det() == Catch::Approx(5e-3).epsilon(1e-12));
    }

    // finite-difference cross-check of the Jacobian
    Vec2 z0{0.37, -0.05};
    double h = 1e-7;
    Mat2 Jz = henon_jacobian(p, z0);
    Vec2 dx = (henon_apply(p, {z0.x + h, z0.y}) - henon_apply(p, {z0.x - h, z0.y})) / (2 * h);
    Vec2 dy = (henon_apply(p, {z0.x, z0.y + h}) - henon_apply(p, {z0.x, z0.y - h})) / (2 * h);
    CHECK(Jz.a00 == Catch::Approx(dx.x).margin(1e-5));
    CHECK(Jz.a10 == Catch::Approx(dx.y).margin(1e-5));
    CHECK(Jz.a01 == Catch::Approx(dy.x).margin(1e-5));
    CHECK(Jz.a11 == Catch::Approx(dy.y).margin(1e-5));
}

TEST_CASE("fixed_points in the 1-D limit") {
    auto fp = fixed_points(MapParams::quadratic(2.0));
    CHECK(fp.P.location.x == Catch::Approx(0.5).margin(1e-14));
    CHECK(fp.P.location.y == 0.0);
    CHECK(fp.P.eig_unstable == Catch::Approx(-2.0).margin(1e-14));
    CHECK(fp.Q.location.x == Catch::Approx(-1.0).margin(1e-14));
    CHECK(fp.Q.eig_unstable == Catch::Approx(4.0).margin(1e-14));
}

TEST_CASE("fixed_points of the Henon variants") {
    for (auto v : {Variant::OrientationReversing, Variant::OrientationPreserving}) {
        for (double b : {1e-2, 1e-3, 1e-4}) {
            auto p = MapParams::henon(2.0, b, v);
            auto fp = fixed_points(p);

            for (const Saddle* s : {&fp.P, &fp.Q}) {
                // fixed to 1e-12
                CHECK(dist(henon_apply(p, s->location), s->location) < 1e-12);
                // saddle ordering
                CHECK(std::abs(s->eig_unstable) > 1.0);
                CHECK(std::abs(s->eig_stable) < 1.0);
                CHECK(std::abs(s->eig_stable) > 0.0);
                // determinant identity
                double det = henon_jacobian(p, s->location).det();
                CHECK(s->eig_unstable * s->eig_stable == Catch::Approx(det).margin(1e-12));
                // eigen-equation residuals
                Mat2 J = henon_jacobian(p, s->location);
                for (auto [dir, lam] : {std::pair{s->dir_unstable, s->eig_unstable},
                                        std::pair{s->dir_stable, s->eig_stable}}) {
                    Vec2 u = dir.unit();
                    Vec2 r = J.apply(u) - lam * u;
                    CHECK(r.norm() < 1e-10);
                }
            }
            CHECK(fp.Q.location.x < -0.9);
            CHECK(fp.P.location.x > 0.4);
        }

        // |Q.eig_unstable - 4| decreases monotonically as b drops
        double prev = 1e9;
        for (double b : {1e-2, 1e-3, 1e-4}) {
            auto fp = fixed_points(MapParams::henon(2.0, b, v));
            double gap = std::abs(std::abs(fp.Q.eig_unstable) - 4.0);
            CHECK(gap < prev);
            prev = gap;
        }
    }

    auto fp = fixed_points(MapParams::henon(2.0, 1e-3, Variant::OrientationReversing));
    CHECK(fp.Q.eig_unstable > 3.9);
    CHECK(fp.Q.eig_unstable < 4.1);
}

TEST_CASE("MapParams validation") {
    CHECK_THROWS(MapParams::henon(2.0, 0.1, Variant::OrientationReversing));
    CHECK_THROWS(MapParams::henon(2.0, 1e-3, Variant::OneDimensional));
    CHECK_THROWS(MapParams::henon(1.0, 1e-3, Variant::OrientationReversing));
    CHECK_THROWS(MapParams::quadratic(-0.3));
    CHECK_NOTHROW(MapParams::quadratic(2.5));
}
