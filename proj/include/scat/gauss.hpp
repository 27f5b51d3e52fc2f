#pragma once

// Gauss-Legendre rules used by every quadrature grid in the library.

#include <cmath>
#include <stdexcept>
#include <utility>
#include <vector>

namespace scat {

struct Rule1d {
    std::vector<double> nodes;
    std::vector<double> weights;
};

// n-point Gauss-Legendre rule on [-1, 1]. Nodes by Newton iteration on P_n
// with the usual cos-based initial guess; weights 2 / ((1-x^2) P_n'(x)^2).
inline Rule1d gauss_legendre(int n)
{
    if (n < 1)
        throw std::invalid_argument("gauss_legendre: need n >= 1");

    Rule1d rule;
    rule.nodes.resize(n);
    rule.weights.resize(n);

    const int mid = (n + 1) / 2;
    for (int i = 0; i < mid; ++i) {
        double x = std::cos(M_PI * (i + 0.75) / (n + 0.5));
        double dp = 0.0;
        for (int iter = 0; iter < 100; ++iter) {
            // Evaluate P_n and P_n' by the Bonnet recurrence.
            double p0 = 1.0, p1 = x;
            for (int l = 2; l <= n; ++l) {
                double p2 = ((2 * l - 1) * x * p1 - (l - 1) * p0) / l;
                p0 = p1;
                p1 = p2;
            }
            double pn = (n == 1) ? x : p1;
            if (n == 1) { p0 = 1.0; }
            dp = n * (x * pn - p0) / (x * x - 1.0);
            double dx = pn / dp;
            x -= dx;
            if (std::abs(dx) < 1e-15)
                break;
        }
        rule.nodes[i] = -x;
        rule.nodes[n - 1 - i] = x;
        double w = 2.0 / ((1.0 - x * x) * dp * dp);
        rule.weights[i] = w;
        rule.weights[n - 1 - i] = w;
    }
    return rule;
}

// Affine map of a [-1,1] rule onto [a, b].
inline Rule1d mapped_to(const Rule1d& rule, double a, double b)
{
    Rule1d out = rule;
    const double half = 0.5 * (b - a);
    const double mid = 0.5 * (b + a);
    for (std::size_t i = 0; i < out.nodes.size(); ++i) {
        out.nodes[i] = mid + half * rule.nodes[i];
        out.weights[i] = half * rule.weights[i];
    }
    return out;
}

} // namespace scat
