#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <random>

#include "scat/ls_solver.hpp"

using namespace scat;

namespace {

struct SmallSetup {
    Potential p;
    SphereGrid sphere;
    VolumeGrid volume;
};

SmallSetup gaussian_setup(double g = -2.0, int n_r = 8, int n_theta = 6, int n_phi = 8)
{
    SmallSetup s{Potential::gaussian(g, 1.0), build_sphere_grid(n_theta, n_phi), {}};
    s.volume = build_volume_grid(build_radial_grid(s.p.support_radius(), n_r), s.sphere);
    return s;
}

// Closed-form s-wave bound-state wavenumber of the square well
// (sqrt(V0-k^2) cot(sqrt(V0-k^2) a) = -k), solved by bisection.
double square_well_kappa(double v0, double a)
{
    auto f = [&](double kappa) {
        const double kin = std::sqrt(v0 - kappa * kappa);
        return kin * std::cos(kin * a) + kappa * std::sin(kin * a);
    };
    double lo = 1e-6, hi = std::sqrt(v0) - 1e-6;
    for (int it = 0; it < 200; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (f(lo) * f(mid) <= 0.0)
            hi = mid;
        else
            lo = mid;
    }
    return 0.5 * (lo + hi);
}

} // namespace

TEST_CASE("kernel vanishes for zero potential", "[kernel]")
{
    auto s = gaussian_setup(0.0);
    const KernelMatrix km = assemble_kernel(s.p, s.volume, 1.0);
    CHECK(km.m.norm() == 0.0);
}

TEST_CASE("shell diagonal rule conserves the shell volume", "[kernel]")
{
    const auto s = gaussian_setup();
    const int per_shell = s.volume.n_theta * s.volume.n_phi;
    for (int shell = 0; shell < s.volume.n_r; ++shell) {
        double cells = 0.0, shells = 0.0;
        for (int j = shell * per_shell; j < (shell + 1) * per_shell; ++j) {
            cells += diagonal_cell_volume(s.volume, j, DiagonalRule::EqualVolumeCell);
            shells += diagonal_cell_volume(s.volume, j, DiagonalRule::EqualVolumeShell);
        }
        CHECK(std::abs(cells - shells) < 1e-12 * std::abs(cells));
    }
}

TEST_CASE("direct solve satisfies the residual contract", "[solve]")
{
    const auto s = gaussian_setup();
    const KernelMatrix km = assemble_kernel(s.p, s.volume, 1.0);
    const WaveTable wt = solve_modified_ls(km, s.p, s.volume, s.sphere);
    CHECK(wt.max_rel_residual < 1e-12);
    CHECK(wt.psi.rows() == s.volume.size());
    CHECK(wt.psi.cols() == s.sphere.size());
}

TEST_CASE("weak coupling: psi stays close to the incident wave", "[solve]")
{
    const auto s = gaussian_setup(0.01);
    const KernelMatrix km = assemble_kernel(s.p, s.volume, 1.0);
    const WaveTable wt = solve_modified_ls(km, s.p, s.volume, s.sphere);
    const double k = 1.0;
    for (int b = 0; b < s.sphere.size(); b += 7) {
        double worst = 0.0;
        for (int i = 0; i < s.volume.size(); ++i) {
            const Complex inc = std::polar(std::sqrt(std::abs(s.p.evaluate(s.volume.nodes[i]))),
                                           k * s.sphere.directions[b].dot(s.volume.nodes[i]));
            worst = std::max(worst, std::abs(wt.psi(i, b) - inc));
        }
        CHECK(worst < 1e-2); // first Born correction scale
    }
}

TEST_CASE("exceptional-value guard triggers", "[solve]")
{
    const auto s = gaussian_setup();
    const KernelMatrix km = assemble_kernel(s.p, s.volume, 1.0);
    CHECK_THROWS_AS(solve_modified_ls(km, s.p, s.volume, s.sphere, /*threshold=*/10.0),
                    ExceptionalValueError);
}

TEST_CASE("smallest singular value probe is sane", "[solve]")
{
    const auto s = gaussian_setup(0.001); // nearly identity operator
    const KernelMatrix km = assemble_kernel(s.p, s.volume, 1.0);
    const double smin = smallest_singular_value(km);
    CHECK(smin > 0.9);
    CHECK(smin < 1.1);
}

TEST_CASE("HS norm of K is consistent with the Rollnik estimate", "[hs]")
{
    // With the per-cell diagonal rule, (4 pi ||K||_HS)^2 equals the Rollnik
    // double-sum exactly: same nodes, weights and diagonal treatment.
    const auto s = gaussian_setup();
    const auto [hk, hff] = hs_norms(s.p, s.volume, 1.0, DiagonalRule::EqualVolumeCell);
    const double rollnik = rollnik_norm_estimate(s.p, s.volume);
    CHECK(std::abs(16.0 * M_PI * M_PI * hk * hk - rollnik) < 1e-10 * rollnik);
    CHECK(hff > 0.0);
    CHECK(hff < hk); // |F*F| kernel is the bounded part of |K|^2
}

TEST_CASE("HS norm of F*F matches Monte Carlo", "[hs][oracle]")
{
    const auto s = gaussian_setup(-2.0, 16, 8, 12);
    const double lambda = 1.0, k = 1.0;
    const auto [hk, hff] = hs_norms(s.p, s.volume, lambda);

    std::mt19937 rng(777);
    const double rv = s.p.support_radius();
    std::uniform_real_distribution<double> uni(-rv, rv);
    auto draw = [&]() {
        for (;;) {
            const Vec3 x(uni(rng), uni(rng), uni(rng));
            if (x.norm() <= rv)
                return x;
        }
    };
    const double ball = 4.0 / 3.0 * M_PI * rv * rv * rv;
    const double c = 1.0 / (4.0 * M_PI * M_PI);
    double acc = 0.0;
    const int samples = 200000;
    for (int i = 0; i < samples; ++i) {
        const Vec3 r = draw(), q = draw();
        const double d = (r - q).norm();
        const double sd = d > 0.0 ? std::sin(k * d) / d : k;
        // Kernel carries |V|^{1/2} on each side: the squared modulus is
        // |V(r)| |V(s)| sin^2(k d)/d^2.
        acc += c * c * std::abs(s.p.evaluate(r)) * std::abs(s.p.evaluate(q)) * sd * sd;
    }
    const double mc = std::sqrt(acc / samples * ball * ball);
    CHECK(std::abs(hff - mc) / mc < 0.05);
}

TEST_CASE("negative-energy kernel is real and decaying", "[bound]")
{
    const auto s = gaussian_setup();
    const MatrixXd m1 = assemble_kernel_negative_energy(s.p, s.volume, 0.5);
    const MatrixXd m2 = assemble_kernel_negative_energy(s.p, s.volume, 2.0);
    CHECK(m1.norm() > m2.norm()); // larger kappa, faster decay
    CHECK_THROWS_AS(assemble_kernel_negative_energy(s.p, s.volume, -1.0), std::invalid_argument);
}

TEST_CASE("bound-state scan agrees with the radial oracle", "[bound][oracle]")
{
    const Potential sw = Potential::square_well(3.0, 1.0);
    const VolumeGrid grid =
        build_volume_grid(build_radial_grid(1.0, 12), build_sphere_grid(6, 12));
    const auto states = bound_state_scan(sw, grid, 0.05, 1.5, 16);
    REQUIRE(states.size() == 1);
    // The equal-volume diagonal rule is first-order for the singular cell,
    // so the kappa location converges slowly; the state count is robust.
    const double oracle = square_well_kappa(3.0, 1.0);
    CHECK(std::abs(states[0].kappa - oracle) / oracle < 0.2);
    CHECK(states[0].energy == -states[0].kappa * states[0].kappa);

    // Below threshold: no states.
    const auto none = bound_state_scan(Potential::square_well(2.0, 1.0), grid, 0.05, 1.5, 16);
    CHECK(none.empty());
}
