#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <complex>

#include "scat/quadrature.hpp"

using namespace scat;

TEST_CASE("Gauss-Legendre rule integrates polynomials exactly", "[gauss]")
{
    // n-point rule is exact through degree 2n-1.
    const Rule1d rule = gauss_legendre(8);
    for (int deg = 0; deg <= 15; ++deg) {
        double acc = 0.0;
        for (std::size_t i = 0; i < rule.nodes.size(); ++i)
            acc += rule.weights[i] * std::pow(rule.nodes[i], deg);
        const double exact = (deg % 2 == 0) ? 2.0 / (deg + 1) : 0.0;
        CHECK(std::abs(acc - exact) < 1e-14);
    }
}

TEST_CASE("mapped rule integrates on shifted interval", "[gauss]")
{
    const Rule1d rule = mapped_to(gauss_legendre(12), 0.0, 3.0);
    double acc = 0.0;
    for (std::size_t i = 0; i < rule.nodes.size(); ++i)
        acc += rule.weights[i] * rule.nodes[i] * rule.nodes[i];
    CHECK(std::abs(acc - 9.0) < 1e-13); // int_0^3 x^2 dx
}

TEST_CASE("sphere grid weights sum to 4 pi and directions are unit", "[sphere]")
{
    const SphereGrid sg = build_sphere_grid(6, 12);
    double total = 0.0;
    for (int a = 0; a < sg.size(); ++a) {
        total += sg.weights[a];
        CHECK(std::abs(sg.directions[a].norm() - 1.0) < 1e-14);
    }
    CHECK(std::abs(total - 4.0 * M_PI) < 1e-12);
}

TEST_CASE("antipode map is exact", "[sphere]")
{
    const SphereGrid sg = build_sphere_grid(5, 8);
    for (int a = 0; a < sg.size(); ++a) {
        const int b = sg.antipode(a);
        CHECK((sg.directions[a] + sg.directions[b]).norm() < 1e-14);
        CHECK(sg.antipode(b) == a);
    }
}

TEST_CASE("odd n_phi is rejected", "[sphere]")
{
    CHECK_THROWS_AS(build_sphere_grid(6, 7), std::invalid_argument);
}

TEST_CASE("sphere quadrature integrates spherical harmonics", "[sphere]")
{
    // Oracle: |Y_3^2|^2 = (105/32 pi) sin^4(theta) cos^2(theta) cos^2(2 phi)
    // + the imaginary-part partner; the full modulus integrates to 1.
    const SphereGrid sg = build_sphere_grid(8, 16);
    auto y32_sq = [](const Vec3& w) {
        const double ct = w.z();
        const double st2 = 1.0 - ct * ct;
        return 105.0 / (32.0 * M_PI) * st2 * st2 * ct * ct;
    };
    double norm = 0.0, mean = 0.0;
    for (int a = 0; a < sg.size(); ++a) {
        norm += sg.weights[a] * y32_sq(sg.directions[a]);
        // Orthogonality of Y_1^0 against Y_2^0 ~ ct * (3 ct^2 - 1).
        const double ct = sg.directions[a].z();
        mean += sg.weights[a] * ct * (3.0 * ct * ct - 1.0);
    }
    CHECK(std::abs(norm - 1.0) < 1e-13);
    CHECK(std::abs(mean) < 1e-13);
}

TEST_CASE("volume grid integrates the ball", "[volume]")
{
    const RadialGrid rg = build_radial_grid(2.0, 10);
    const SphereGrid sg = build_sphere_grid(4, 8);
    const VolumeGrid vg = build_volume_grid(rg, sg);
    REQUIRE(vg.size() == 10 * 4 * 8);
    double vol = 0.0, second = 0.0;
    for (int i = 0; i < vg.size(); ++i) {
        vol += vg.weights[i];
        second += vg.weights[i] * vg.nodes[i].squaredNorm();
    }
    CHECK(std::abs(vol - 4.0 / 3.0 * M_PI * 8.0) < 1e-11);
    // int_{|r|<2} r^2 dV = 4 pi 2^5 / 5
    CHECK(std::abs(second - 4.0 * M_PI * 32.0 / 5.0) < 1e-11);
}
