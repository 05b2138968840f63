#include <cmath>
#include <numbers>
#include <stdexcept>

#include "doctest.h"
#include "qwdirac/characteristics.hpp"

using namespace qwd;

namespace {

const double PI = std::numbers::pi;

double fixed_step_endpoint(const ThetaField& theta, int branch, double X0, double T_max,
                           double h) {
    double T = 0.0, X = X0;
    while (T < T_max - 1e-12) {
        X = characteristic_rk4_step(theta, branch, T, X, h);
        T += h;
    }
    return X;
}

} // namespace

TEST_CASE("characteristic speeds: values and domain wall") {
    const ThetaField flat = [](double, double) { return 0.0; };
    const auto [l0, r0] = characteristic_speed(0.0, 0.0, flat);
    CHECK(l0 == -1.0);
    CHECK(r0 == 1.0);

    const ThetaField third = [](double, double) { return PI / 3; };
    const auto [l1, r1] = characteristic_speed(1.0, 2.0, third);
    CHECK(l1 == doctest::Approx(-0.5).epsilon(1e-15));
    CHECK(r1 == doctest::Approx(0.5).epsilon(1e-15));

    const ThetaField wide = [](double, double) { return 2.0; };
    CHECK_THROWS_AS(characteristic_speed(0.0, 0.0, wide), std::domain_error);
}

TEST_CASE("flat field: characteristics are straight light rays") {
    const ThetaField flat = [](double, double) { return 0.0; };
    const GeodesicPath plus = integrate_characteristic(0.0, +1, flat, 3.0, 0.25);
    REQUIRE(plus.T.size() == 13);
    for (std::size_t i = 0; i < plus.T.size(); ++i)
        CHECK(std::abs(plus.X[i] - plus.T[i]) < 1e-12);
    CHECK_FALSE(plus.hit_boundary);

    const GeodesicPath minus = integrate_characteristic(0.0, -1, flat, 3.0, 0.25);
    for (std::size_t i = 0; i < minus.T.size(); ++i)
        CHECK(std::abs(minus.X[i] + minus.T[i]) < 1e-12);
}

TEST_CASE("branches mirror each other for an X-even field") {
    const ThetaField even = [](double, double X) { return 0.3 + 0.2 * std::cos(X - 1.5); };
    const GeodesicPath p = integrate_characteristic(1.5, +1, even, 2.0, 0.1);
    const GeodesicPath m = integrate_characteristic(1.5, -1, even, 2.0, 0.1);
    REQUIRE(p.T.size() == m.T.size());
    for (std::size_t i = 0; i < p.T.size(); ++i)
        CHECK(std::abs((p.X[i] - 1.5) + (m.X[i] - 1.5)) < 1e-9);
}

TEST_CASE("raw RK4 step is fourth order") {
    const ThetaField smooth = [](double T, double X) {
        return 0.4 + 0.3 * std::sin(X) * std::cos(0.7 * T);
    };
    const double ref = fixed_step_endpoint(smooth, +1, 0.3, 2.0, 2.0 / 2048);
    const double e1 = std::abs(fixed_step_endpoint(smooth, +1, 0.3, 2.0, 0.25) - ref);
    const double e2 = std::abs(fixed_step_endpoint(smooth, +1, 0.3, 2.0, 0.125) - ref);
    CHECK(e1 / e2 > 12.0);
    CHECK(e1 / e2 < 20.0);
}

TEST_CASE("adaptive integration meets the error budget at a coarse dt") {
    const ThetaField smooth = [](double T, double X) {
        return 0.4 + 0.3 * std::sin(X) * std::cos(0.7 * T);
    };
    const GeodesicPath p = integrate_characteristic(0.3, +1, smooth, 4.0, 0.5);
    const double ref = fixed_step_endpoint(smooth, +1, 0.3, 4.0, 1e-4);
    CHECK(std::abs(p.X.back() - ref) < 1e-7);
    CHECK(p.T.back() == doctest::Approx(4.0).epsilon(1e-12));
}

TEST_CASE("path stops at the domain boundary") {
    const ThetaField walled = [](double, double X) {
        if (X > 2.0) throw std::domain_error("outside");
        return 0.0;
    };
    const GeodesicPath p = integrate_characteristic(0.0, +1, walled, 10.0, 0.5);
    CHECK(p.hit_boundary);
    CHECK(std::abs(p.X.back() - 2.0) < 1e-6);
    CHECK(std::abs(p.T.back() - 2.0) < 1e-6);
    for (std::size_t i = 1; i < p.T.size(); ++i) CHECK(p.T[i] > p.T[i - 1]);

    CHECK_THROWS_AS(integrate_characteristic(3.0, +1, walled, 1.0, 0.5), std::domain_error);
    CHECK_THROWS_AS(integrate_characteristic(0.0, 0, walled, 1.0, 0.5), std::invalid_argument);
}

TEST_CASE("path decelerates into a square-root singularity and stops") {
    // cos(theta) = sqrt(X): the left branch solves dX/dT = -sqrt(X), reaching
    // X = 0 at T = 2 sqrt(X0) where the characteristic degenerates
    const ThetaField rooty = [](double, double X) {
        if (X < 0.0) throw std::domain_error("below the singularity");
        return std::acos(std::min(1.0, std::sqrt(X)));
    };
    const GeodesicPath p = integrate_characteristic(0.5, -1, rooty, 5.0, 0.05);
    CHECK(p.hit_boundary);
    CHECK(p.X.back() < 1e-3);
    CHECK(std::abs(p.T.back() - 2.0 * std::sqrt(0.5)) < 0.05);
}
