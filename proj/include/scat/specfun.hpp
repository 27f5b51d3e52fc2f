#pragma once

// Legendre polynomials and spherical Bessel functions for the partial-wave
// machinery. j_l uses downward (Miller) recurrence for stability, y_l goes
// upward; both are standard.

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

#include "scat/gauss.hpp"

namespace scat {

// P_0..P_L at x by the Bonnet recurrence.
inline std::vector<double> legendre_all(int l_max, double x)
{
    if (std::abs(x) > 1.0 + 1e-14)
        throw std::invalid_argument("legendre_all: |x| must be <= 1");
    x = std::clamp(x, -1.0, 1.0);
    std::vector<double> p(static_cast<std::size_t>(l_max) + 1);
    p[0] = 1.0;
    if (l_max >= 1)
        p[1] = x;
    for (int l = 1; l < l_max; ++l)
        p[l + 1] = ((2 * l + 1) * x * p[l] - l * p[l - 1]) / (l + 1);
    return p;
}

inline double legendre_p(int l, double x)
{
    if (l < 0)
        throw std::invalid_argument("legendre_p: degree must be >= 0");
    return legendre_all(l, x)[static_cast<std::size_t>(l)];
}

struct SphericalBessel {
    double j, y, jp, yp; // j_l(x), y_l(x) and derivatives
};

// Regular and irregular spherical Bessel values and derivatives at x > 0.
inline SphericalBessel spherical_bessel(int l, double x)
{
    if (l < 0)
        throw std::invalid_argument("spherical_bessel: degree must be >= 0");
    if (x <= 0.0)
        throw std::invalid_argument("spherical_bessel: x must be positive");

    const double j0 = std::sin(x) / x;
    const double y0 = -std::cos(x) / x;
    const double y1 = -std::cos(x) / (x * x) - std::sin(x) / x;

    // y_l upward (stable for the irregular solution).
    std::vector<double> yv(static_cast<std::size_t>(std::max(l, 1)) + 1);
    yv[0] = y0;
    yv[1] = y1;
    for (int n = 1; n < l; ++n)
        yv[n + 1] = (2 * n + 1) / x * yv[n] - yv[n - 1];

    // j_l downward from a start order with a stability margin, normalized
    // against the closed-form j_0.
    std::vector<double> jv(static_cast<std::size_t>(std::max(l, 1)) + 1);
    {
        const int start = l + static_cast<int>(std::ceil(x)) + 40;
        std::vector<double> tail(static_cast<std::size_t>(start) + 1);
        double fp1 = 0.0, f = 1e-30; // j_{start+1}, j_{start} seeds
        tail[static_cast<std::size_t>(start)] = f;
        for (int n = start; n >= 1; --n) {
            const double fm1 = (2 * n + 1) / x * f - fp1;
            fp1 = f;
            f = fm1;
            tail[static_cast<std::size_t>(n - 1)] = f;
            // Rescale to dodge overflow on long recurrences.
            if (std::abs(f) > 1e250) {
                fp1 *= 1e-250;
                f *= 1e-250;
                for (auto& t : tail)
                    t *= 1e-250;
            }
        }
        const double scale = j0 / tail[0];
        for (int n = 0; n <= std::max(l, 1); ++n)
            jv[static_cast<std::size_t>(n)] = tail[static_cast<std::size_t>(n)] * scale;
    }

    SphericalBessel out;
    out.j = jv[static_cast<std::size_t>(l)];
    out.y = yv[static_cast<std::size_t>(l)];
    if (l == 0) {
        out.jp = -jv[1];
        out.yp = -yv[1];
    } else {
        // f_l' = f_{l-1} - (l+1)/x f_l
        out.jp = jv[static_cast<std::size_t>(l - 1)] - (l + 1) / x * out.j;
        out.yp = yv[static_cast<std::size_t>(l - 1)] - (l + 1) / x * out.y;
    }
    return out;
}

// Numerical audit of int_0^pi P_l(cos t)^2 sin t dt with an n-point rule.
// The standard normalization gives 2/(2l+1).
inline double legendre_norm_integral(int l, int n_nodes)
{
    if (n_nodes < l + 1)
        throw std::invalid_argument("legendre_norm_integral: rule too coarse for degree");
    const Rule1d rule = gauss_legendre(n_nodes); // in x = cos(theta)
    double acc = 0.0;
    for (int i = 0; i < n_nodes; ++i) {
        const double p = legendre_p(l, rule.nodes[i]);
        acc += rule.weights[i] * p * p;
    }
    return acc;
}

} // namespace scat
