#pragma once

// Radial, spherical and product 3D quadrature grids. The sphere grid is a
// product rule: Gauss-Legendre in cos(theta) times a uniform (trapezoid)
// rule in phi. It is antipodally closed for even n_phi, which the amplitude
// reciprocity checks rely on.

#include <Eigen/Dense>
#include <cstdio>
#include <stdexcept>
#include <string>
#include <vector>

#include "scat/gauss.hpp"

namespace scat {

using Vec3 = Eigen::Vector3d;

struct RadialGrid {
    std::vector<double> nodes;   // strictly increasing, interior to (0, r_max)
    std::vector<double> weights; // plain dr weights, no r^2 Jacobian
    double r_max = 0.0;
};

struct SphereGrid {
    std::vector<Vec3> directions;  // unit vectors
    std::vector<double> weights;   // solid-angle weights, sum = 4*pi
    std::vector<double> cos_theta; // polar cosine per node (diagnostics)
    int n_theta = 0;
    int n_phi = 0;

    int size() const { return static_cast<int>(directions.size()); }

    // Index of the antipode of node a (exact by construction).
    int antipode(int a) const
    {
        const int it = a / n_phi;
        const int ip = a % n_phi;
        const int it2 = n_theta - 1 - it;
        const int ip2 = (ip + n_phi / 2) % n_phi;
        return it2 * n_phi + ip2;
    }
};

struct VolumeGrid {
    std::vector<Vec3> nodes;
    std::vector<double> weights; // full 3D measure: w_r * r^2 * mu_omega
    std::vector<double> radii;   // |node|, kept for radial-profile diagnostics
    int n_r = 0, n_theta = 0, n_phi = 0;

    int size() const { return static_cast<int>(nodes.size()); }
};

inline RadialGrid build_radial_grid(double r_max, int n)
{
    if (r_max <= 0.0)
        throw std::invalid_argument("build_radial_grid: r_max must be positive");
    if (n < 2)
        throw std::invalid_argument("build_radial_grid: need n >= 2");
    Rule1d rule = mapped_to(gauss_legendre(n), 0.0, r_max);
    return RadialGrid{std::move(rule.nodes), std::move(rule.weights), r_max};
}

inline SphereGrid build_sphere_grid(int n_theta, int n_phi)
{
    if (n_theta < 2)
        throw std::invalid_argument("build_sphere_grid: need n_theta >= 2");
    if (n_phi < 2 || n_phi % 2 != 0)
        throw std::invalid_argument("build_sphere_grid: n_phi must be even and >= 2");

    SphereGrid sg;
    sg.n_theta = n_theta;
    sg.n_phi = n_phi;
    sg.directions.reserve(static_cast<std::size_t>(n_theta) * n_phi);
    sg.weights.reserve(static_cast<std::size_t>(n_theta) * n_phi);

    const Rule1d polar = gauss_legendre(n_theta); // rule in x = cos(theta)
    const double wphi = 2.0 * M_PI / n_phi;
    for (int it = 0; it < n_theta; ++it) {
        const double x = polar.nodes[it];
        const double st = std::sqrt(1.0 - x * x);
        for (int ip = 0; ip < n_phi; ++ip) {
            const double phi = wphi * ip;
            sg.directions.emplace_back(st * std::cos(phi), st * std::sin(phi), x);
            sg.weights.push_back(polar.weights[it] * wphi);
            sg.cos_theta.push_back(x);
        }
    }
    return sg;
}

inline VolumeGrid build_volume_grid(const RadialGrid& rg, const SphereGrid& sg)
{
    VolumeGrid vg;
    vg.n_r = static_cast<int>(rg.nodes.size());
    vg.n_theta = sg.n_theta;
    vg.n_phi = sg.n_phi;
    const std::size_t total = rg.nodes.size() * sg.directions.size();
    vg.nodes.reserve(total);
    vg.weights.reserve(total);
    vg.radii.reserve(total);

    for (std::size_t ir = 0; ir < rg.nodes.size(); ++ir) {
        const double r = rg.nodes[ir];
        const double wr2 = rg.weights[ir] * r * r;
        for (int a = 0; a < sg.size(); ++a) {
            vg.nodes.push_back(r * sg.directions[a]);
            vg.weights.push_back(wr2 * sg.weights[a]);
            vg.radii.push_back(r);
        }
    }
    return vg;
}

// Diagnostic text dump: one "x y z weight" line per node.
inline void dump_grid(const VolumeGrid& vg, std::FILE* out)
{
    for (int i = 0; i < vg.size(); ++i)
        std::fprintf(out, "%.17e %.17e %.17e %.17e\n", vg.nodes[i].x(), vg.nodes[i].y(),
                     vg.nodes[i].z(), vg.weights[i]);
}

inline void dump_grid(const SphereGrid& sg, std::FILE* out)
{
    for (int a = 0; a < sg.size(); ++a)
        std::fprintf(out, "%.17e %.17e %.17e %.17e\n", sg.directions[a].x(),
                     sg.directions[a].y(), sg.directions[a].z(), sg.weights[a]);
}

} // namespace scat
