#include "catch_amalgamated.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include "henonlab/pressure1d.hpp"
#include "oracles.hpp"

using namespace henonlab;

static constexpr double LOG2 = 0.6931471805599453;
static constexpr double LOG4 = 2.0 * LOG2;

TEST_CASE("t2_periodic_points n=1 matches the root-finding oracle") {
    auto pts = t2_periodic_points(1);
    REQUIRE(pts.size() == 2);
    std::sort(pts.begin(), pts.end(),
              [](auto& a, auto& b) { return a.representative < b.representative; });
    // oracle: Newton on T_2(x) = x from seeds -1.2 and 0.4
    auto r0 = oracle::newton_fixed_point(2.0, 1, -1.2);
    auto r1 = oracle::newton_fixed_point(2.0, 1, 0.4);
    REQUIRE(r0);
    REQUIRE(r1);
    CHECK(pts[0].representative == Catch::Approx(*r0).margin(1e-12));  // -1
    CHECK(pts[1].representative == Catch::Approx(*r1).margin(1e-12));  // 1/2
    CHECK(pts[0].multiplier() == Catch::Approx(4.0).margin(1e-12));
    CHECK(pts[1].multiplier() == Catch::Approx(-2.0).margin(1e-12));
}

TEST_CASE("t2_periodic_points n=2: genuine 2-cycle exponents sit in [log2, log4]") {
    auto pts = t2_periodic_points(2);
    REQUIRE(pts.size() == 4);
    int genuine = 0;
    for (auto& po : pts) {
        double x = po.representative;
        if (std::abs(x + 1.0) < 1e-9 || std::abs(x - 0.5) < 1e-9) continue;  // embedded period-1
        ++genuine;
        double lyap = 0.5 * po.log_abs_multiplier;
        CHECK(lyap >= LOG2 - 1e-9);
        CHECK(lyap <= LOG4 + 1e-9);
        // oracle: Newton on T_2^2 from a nearby seed agrees
        auto r = oracle::newton_fixed_point(2.0, 2, x + 1e-3);
        REQUIRE(r);
        CHECK(x == Catch::Approx(*r).margin(1e-9));
    }
    CHECK(genuine == 2);
}

TEST_CASE("t2_periodic_points counts match the grid-bisection oracle for n <= 12") {
    for (int n = 1; n <= 12; ++n) {
        auto pts = t2_periodic_points(n);
        CHECK(pts.size() == (std::size_t(1) << n));
        if (n <= 7) {
            // A 1e6 grid resolves all root pairs up to n = 7; from n = 8 the
            // two trig families produce neighbors closer than the grid step.
            int oracle_count = oracle::count_fixed_points_bisection(2.0, n, -1.0 - 1e-7, 1.0, 1000000);
            CHECK(oracle_count == int(pts.size()));
        } else {
            // deeper n: all points distinct and each survives a Newton polish
            std::vector<double> xs;
            for (auto& po : pts) xs.push_back(po.representative);
            std::sort(xs.begin(), xs.end());
            for (std::size_t i = 1; i < xs.size(); ++i) CHECK(xs[i] - xs[i - 1] > 1e-12);
            for (std::size_t i = 0; i < pts.size(); i += pts.size() / 64) {
                auto r = oracle::newton_fixed_point(2.0, n, pts[i].representative);
                REQUIRE(r);
                CHECK(std::abs(*r - pts[i].representative) < 1e-8);
            }
        }
    }
}

TEST_CASE("t2 fixed-point residuals and multiplier structure") {
    for (int n : {1, 2, 4, 6, 8, 10}) {
        auto pts = t2_periodic_points(n);
        int log4_points = 0;
        for (auto& po : pts) {
            // |T^n(x) - x| small; direct iteration noise grows like 4^n eps
            double res = std::abs(oracle::quad_iter(2.0, po.representative, n) - po.representative);
            CHECK(res <= std::max(1e-9, std::pow(4.0, n) * 1e-15));
            // multiplier is exactly 2^n in modulus except at x = -1 (4^n)
            double per_step = po.log_abs_multiplier / n;
            if (std::abs(per_step - LOG4) < 1e-9) ++log4_points;
            else CHECK(per_step == Catch::Approx(LOG2).margin(1e-9));
            // product formula vs forward-orbit oracle (relative)
            double d = oracle::quad_iter_derivative(2.0, po.representative, n);
            CHECK(po.log_abs_multiplier == Catch::Approx(std::log(std::abs(d))).margin(1e-7));
        }
        CHECK(log4_points == 1);
    }
}

TEST_CASE("quad_periodic_points: hyperbolic a=2.5 fixed points, full-shift counts") {
    auto pts = quad_periodic_points(2.5, 1);
    REQUIRE(pts.size() == 2);
    // oracle: quadratic formula for a x^2 + x - 1 = 0
    double s = std::sqrt(1.0 + 10.0);
    double xm = (-1.0 - s) / 5.0, xp = (-1.0 + s) / 5.0;
    std::sort(pts.begin(), pts.end(),
              [](auto& a, auto& b) { return a.representative < b.representative; });
    CHECK(pts[0].representative == Catch::Approx(xm).margin(1e-12));
    CHECK(pts[1].representative == Catch::Approx(xp).margin(1e-12));
    for (auto& po : pts) CHECK(std::exp(po.log_abs_multiplier) > 1.0);

    CHECK(quad_periodic_points(2.0, 3).size() == 8);
    CHECK_THROWS(quad_periodic_points(1.9, 3));
}

TEST_CASE("cross-oracle: the two enumerators agree at a=2 after itinerary matching") {
    for (int n : {1, 2, 3, 5, 8, 10, 12}) {
        auto trig = t2_periodic_points(n);
        auto pull = quad_periodic_points(2.0, n);
        REQUIRE(trig.size() == pull.size());
        std::map<std::string, double> by_itinerary;
        for (auto& po : pull) by_itinerary[po.itinerary] = po.representative;
        for (auto& po : trig) {
            auto it = by_itinerary.find(po.itinerary);
            REQUIRE(it != by_itinerary.end());
            CHECK(std::abs(it->second - po.representative) < 1e-8);
        }
    }
}

TEST_CASE("orbit_uum_pressure exactness and closed-form limits") {
    auto p10 = t2_periodic_points(10);
    CHECK(orbit_sum_pressure(p10, 0.0, 10) == Catch::Approx(LOG2).margin(1e-12));

    auto p14 = t2_periodic_points(14);
    CHECK(orbit_sum_pressure(p14, -2.0, 14) == Catch::Approx(2.0 * LOG4).margin(0.05));
    CHECK(orbit_sum_pressure(p14, 1.0, 14) == Catch::Approx(0.0).margin(0.05));

    // analytic partition function (2^n - 1) 2^{-n t} + 4^{-n t} as an oracle
    for (double t : {-2.5, -1.0, -0.3, 0.7, 1.4}) {
        double n = 14.0;
        double z = (std::pow(2.0, n) - 1.0) * std::pow(2.0, -n * t) + std::pow(4.0, -n * t);
        CHECK(orbit_sum_pressure(p14, t, 14) == Catch::Approx(std::log(z) / n).margin(1e-9));
    }

    CHECK_THROWS(orbit_sum_pressure({}, 0.0, 1));
}

TEST_CASE("t2_pressure_closed_form values") {
    CHECK(t2_pressure_closed_form(-1.0) == Catch::Approx(LOG4).margin(1e-15));
    CHECK(t2_pressure_closed_form(0.0) == Catch::Approx(LOG2).margin(1e-15));
    CHECK(t2_pressure_closed_form(1.0) == Catch::Approx(0.0).margin(1e-15));
}

TEST_CASE("detect_kink: closed form, affine, and finite-n curves") {
    auto cf = t2_closed_form_curve(-3.0, 1.0, 0.02);
    auto k = detect_kink(cf);
    REQUIRE(k);
    CHECK(std::abs(*k + 1.0) <= 0.02 + 1e-12);

    PressureCurve affine;
    affine.method = PressureMethod::ClosedForm;
    for (double t = -2.0; t <= 2.0; t += 0.02) {
        affine.t_grid.push_back(t);
        affine.values.push_back(0.3 - 1.1 * t);
        affine.error_proxy.push_back(0.0);
    }
    CHECK(!detect_kink(affine));

    auto p18 = t2_periodic_points(18);
    auto c18 = orbit_sum_curve(p18, 18, -3.0, 1.5, 0.02);
    auto k18 = detect_kink(c18);
    REQUIRE(k18);
    CHECK(std::abs(*k18 + 1.0) <= 0.15);

    PressureCurve tiny;
    tiny.t_grid = {0.0, 1.0};
    tiny.values = {0.0, 0.0};
    CHECK_THROWS(detect_kink(tiny));
}

TEST_CASE("detect_kink stays silent on the smooth hyperbolic curve (a=2.2)") {
    auto pts = quad_periodic_points(2.2, 14);
    auto c = orbit_sum_curve(pts, 14, -3.0, 1.5, 0.02);
    CHECK(!detect_kink(c));
}

TEST_CASE("pressure curve properties: convexity, slope bounds, completeness") {
    auto pts = t2_periodic_points(14);
    auto c = orbit_sum_curve(pts, 14, -3.0, 1.5, 0.02);
    double h = 0.02;
    for (std::size_t i = 1; i + 1 < c.values.size(); ++i) {
        double second = c.values[i - 1] - 2.0 * c.values[i] + c.values[i + 1];
        CHECK(second >= -1e-9);
        double slope = (c.values[i + 1] - c.values[i - 1]) / (2.0 * h);
        CHECK(slope >= -LOG4 - 1e-6);
        CHECK(slope <= -LOG2 + 1e-6);
    }
    // enumerator completeness: sum over multipliers of |Lambda|^0 = 2^n
    CHECK(orbit_sum_pressure(pts, 0.0, 14) == Catch::Approx(LOG2).margin(1e-12));
}
