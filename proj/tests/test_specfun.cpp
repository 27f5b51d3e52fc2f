#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "scat/specfun.hpp"

using namespace scat;

TEST_CASE("Legendre recurrence matches std::legendre", "[legendre]")
{
    for (double x : {-0.9, -0.3, 0.0, 0.5, 1.0}) {
        const auto p = legendre_all(10, x);
        for (int l = 0; l <= 10; ++l)
            CHECK(std::abs(p[static_cast<std::size_t>(l)] - std::legendre(l, x)) < 1e-13);
    }
}

TEST_CASE("Legendre norm integral audit gives 2/(2l+1)", "[legendre]")
{
    for (int l = 0; l <= 8; ++l)
        CHECK(std::abs(legendre_norm_integral(l, 32) - 2.0 / (2 * l + 1)) < 1e-14);
}

TEST_CASE("spherical Bessel closed forms", "[bessel]")
{
    for (double x : {0.3, 1.0, 2.7, 9.4}) {
        const SphericalBessel b0 = spherical_bessel(0, x);
        CHECK(std::abs(b0.j - std::sin(x) / x) < 1e-14);
        CHECK(std::abs(b0.y + std::cos(x) / x) < 1e-14);

        const SphericalBessel b1 = spherical_bessel(1, x);
        CHECK(std::abs(b1.j - (std::sin(x) / (x * x) - std::cos(x) / x)) < 1e-14);
        CHECK(std::abs(b1.y - (-std::cos(x) / (x * x) - std::sin(x) / x)) < 1e-14);

        const SphericalBessel b2 = spherical_bessel(2, x);
        const double j2 = (3.0 / (x * x) - 1.0) * std::sin(x) / x - 3.0 * std::cos(x) / (x * x);
        CHECK(std::abs(b2.j - j2) < 1e-13);
    }
}

TEST_CASE("spherical Bessel Wronskian", "[bessel]")
{
    // j_l y_l' - j_l' y_l = 1/x^2 for all l.
    for (int l : {0, 1, 3, 8, 15}) {
        for (double x : {0.5, 2.0, 11.3}) {
            const SphericalBessel b = spherical_bessel(l, x);
            const double w = b.j * b.yp - b.jp * b.y;
            CHECK(std::abs(w - 1.0 / (x * x)) < 1e-12 / (x * x));
        }
    }
}

TEST_CASE("spherical Bessel small-argument regularity", "[bessel]")
{
    // j_l(x) ~ x^l / (2l+1)!! near zero; downward recurrence must not blow up.
    const SphericalBessel b = spherical_bessel(5, 0.01);
    const double dblfac = 3.0 * 5.0 * 7.0 * 9.0 * 11.0;
    CHECK(std::abs(b.j - std::pow(0.01, 5) / dblfac) < 1e-15);
}

TEST_CASE("invalid arguments are rejected", "[bessel]")
{
    CHECK_THROWS_AS(spherical_bessel(-1, 1.0), std::invalid_argument);
    CHECK_THROWS_AS(spherical_bessel(2, 0.0), std::invalid_argument);
    CHECK_THROWS_AS(legendre_all(3, 1.5), std::invalid_argument);
}
