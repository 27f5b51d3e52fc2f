#pragma once

// Nystrom discretization of the symmetrized Lippmann-Schwinger kernel K(lambda),
// the multi-right-hand-side direct solve of (I+K) psi = b, and the spectral /
// integrability diagnostics built on top of it (exceptional-value probe,
// bound-state scan at lambda < 0, Hilbert-Schmidt norms, far-field check).

#include <Eigen/Dense>
#include <cmath>
#include <complex>
#include <memory>
#include <stdexcept>
#include <vector>

#include "scat/linalg.hpp"
#include "scat/potential.hpp"
#include "scat/quadrature.hpp"

namespace scat {

// Per-node samples of the potential over a volume grid: V, W = sign(V) and
// s = |V|^{1/2}. Built once and shared by kernel assembly and the amplitude.
struct PotentialSamples {
    std::vector<double> v, w, s;

    PotentialSamples(const Potential& p, const VolumeGrid& grid)
    {
        const int n = grid.size();
        v.resize(n);
        w.resize(n);
        s.resize(n);
        for (int i = 0; i < n; ++i) {
            v[i] = p.evaluate(grid.nodes[i]);
            auto [wi, si] = p.sign_and_sqrt(grid.nodes[i]);
            w[i] = wi;
            s[i] = si;
        }
    }
};

// Rule for the singular diagonal Nystrom cell of the 1/|r-s| kernel. Both
// replace the cell integral of 1/|r-s| by its value over an equal-volume
// sphere, 2 pi rho^2; they differ in which volume defines rho.
enum class DiagonalRule {
    // rho from the node's own quadrature cell volume w_i. The cell volume
    // carries the polar Gauss weight, so rho varies with theta.
    EqualVolumeCell,
    // rho from the radial shell volume shared equally over the sphere nodes:
    // w_r r^2 (4 pi / A). Isotropic, so a spherically symmetric potential
    // yields an exactly axially-isotropic discrete operator.
    EqualVolumeShell,
};

inline double diagonal_cell_volume(const VolumeGrid& grid, int i, DiagonalRule rule)
{
    if (rule == DiagonalRule::EqualVolumeCell)
        return grid.weights[i];
    const int nodes_per_shell = grid.n_theta * grid.n_phi;
    const int shell = i / nodes_per_shell;
    double shell_volume = 0.0;
    // Shell volume = sum of cell volumes at this radius; weights within a
    // shell sum to w_r r^2 * 4 pi.
    const int begin = shell * nodes_per_shell;
    for (int j = begin; j < begin + nodes_per_shell; ++j)
        shell_volume += grid.weights[j];
    return shell_volume / nodes_per_shell;
}

struct KernelMatrix {
    double lambda = 0.0;
    MatrixXcd m; // K with Nystrom weights absorbed in the columns

    // Lazy LU of I+K, shared by the solve and the singular-value probe.
    const ComplexLu& lu() const
    {
        if (!lu_) {
            MatrixXcd a = m;
            a.diagonal().array() += 1.0;
            lu_ = std::make_shared<ComplexLu>(std::move(a));
        }
        return *lu_;
    }

private:
    mutable std::shared_ptr<ComplexLu> lu_;
};

// Exact integral of e^{ik|x|}/|x| over the ball |x| < rho:
//   4 pi [ e^{ik rho} (1/k^2 - i rho/k) - 1/k^2 ]  ->  2 pi rho^2 as k -> 0.
// Keeping the phase (instead of the unit-phase value 2 pi rho^2) removes the
// leading imaginary part of the diagonal error, which otherwise dominates the
// unitarity defect of the assembled S operator.
inline Complex diagonal_cell_integral(double k, double rho)
{
    return 4.0 * M_PI *
           (std::polar(1.0, k * rho) * Complex(1.0 / (k * k), -rho / k) -
            Complex(1.0 / (k * k), 0.0));
}

// K_ij = (1/4pi) s_i exp(i k |r_i - r_j|)/|r_i - r_j| W_j s_j w_j for i != j;
// the diagonal integrates the singular kernel exactly over an equal-volume
// sphere: K_ii = (1/4pi) |V_i| W_i int_{|x|<rho_i} e^{ik|x|}/|x| dx.
inline KernelMatrix assemble_kernel(const Potential& p, const VolumeGrid& grid, double lambda,
                                    DiagonalRule rule = DiagonalRule::EqualVolumeShell)
{
    if (lambda <= 0.0)
        throw std::invalid_argument("assemble_kernel: lambda must be positive "
                                    "(use bound_state_scan for lambda < 0)");
    const double k = std::sqrt(lambda);
    const int n = grid.size();
    const PotentialSamples ps(p, grid);

    KernelMatrix km;
    km.lambda = lambda;
    km.m.resize(n, n);
    const double c = 1.0 / (4.0 * M_PI);
    for (int j = 0; j < n; ++j) {
        const double colfac = ps.w[j] * ps.s[j] * grid.weights[j];
        if (colfac == 0.0) {
            km.m.col(j).setZero();
            if (ps.v[j] != 0.0) {
                const double rho = std::cbrt(3.0 * diagonal_cell_volume(grid, j, rule) / (4.0 * M_PI));
                km.m(j, j) = c * std::abs(ps.v[j]) * ps.w[j] * diagonal_cell_integral(k, rho);
            }
            continue;
        }
        for (int i = 0; i < n; ++i) {
            if (i == j)
                continue;
            if (ps.s[i] == 0.0) {
                km.m(i, j) = 0.0;
                continue;
            }
            const double d = (grid.nodes[i] - grid.nodes[j]).norm();
            km.m(i, j) = c * ps.s[i] * std::polar(1.0, k * d) / d * colfac;
        }
        const double rho = std::cbrt(3.0 * diagonal_cell_volume(grid, j, rule) / (4.0 * M_PI));
        km.m(j, j) = c * std::abs(ps.v[j]) * ps.w[j] * diagonal_cell_integral(k, rho);
    }
    return km;
}

struct WaveTable {
    double lambda = 0.0;
    MatrixXcd psi;          // N volume nodes x M incident directions
    double max_rel_residual = 0.0;
};

struct ExceptionalValueError : std::runtime_error {
    double lambda, sigma_min, sigma_max;
    ExceptionalValueError(double lam, double smin, double smax)
        : std::runtime_error("I+K(lambda) is numerically singular at lambda=" +
                             std::to_string(lam) + " (sigma_min=" + std::to_string(smin) + ")"),
          lambda(lam), sigma_min(smin), sigma_max(smax)
    {
    }
};

// sigma_min(I+K), the numerical surrogate for exceptional-value detection.
inline double smallest_singular_value(const KernelMatrix& km)
{
    if (km.lu().exactly_singular())
        return 0.0;
    return sigma_min_estimate(km.lu());
}

// Solves the modified LS equation for every incident direction of the sphere
// grid with one factorization: (I+K) psi_b = e^{i k w_b . r} |V|^{1/2}.
// Refuses lambda flagged exceptional (sigma_min below threshold * sigma_max).
inline WaveTable solve_modified_ls(const KernelMatrix& km, const Potential& p,
                                   const VolumeGrid& grid, const SphereGrid& incident,
                                   double exceptional_threshold = 1e-8)
{
    const int n = grid.size();
    const int m = incident.size();
    const double k = std::sqrt(km.lambda);
    const PotentialSamples ps(p, grid);

    MatrixXcd a = km.m;
    a.diagonal().array() += 1.0;

    const double smax = sigma_max_estimate(a);
    const double smin = smallest_singular_value(km);
    if (smin < exceptional_threshold * smax)
        throw ExceptionalValueError(km.lambda, smin, smax);

    MatrixXcd rhs(n, m);
    for (int b = 0; b < m; ++b) {
        const Vec3& dir = incident.directions[b];
        for (int i = 0; i < n; ++i)
            rhs(i, b) = std::polar(ps.s[i], k * dir.dot(grid.nodes[i]));
    }

    WaveTable wt;
    wt.lambda = km.lambda;
    wt.psi = km.lu().solve(rhs);

    // Direct-solve residual contract, per column.
    double worst = 0.0;
    const MatrixXcd res = a * wt.psi - rhs;
    for (int b = 0; b < m; ++b) {
        const double denom = rhs.col(b).norm();
        if (denom > 0.0)
            worst = std::max(worst, res.col(b).norm() / denom);
    }
    wt.max_rel_residual = worst;
    return wt;
}

// Smallest singular value of I+K(i kappa); the kernel at lambda = -kappa^2 is
// real with a decaying exponential in place of the oscillatory phase.
inline MatrixXd assemble_kernel_negative_energy(const Potential& p, const VolumeGrid& grid,
                                                double kappa,
                                                DiagonalRule rule = DiagonalRule::EqualVolumeShell)
{
    if (kappa <= 0.0)
        throw std::invalid_argument("assemble_kernel_negative_energy: kappa must be positive");
    const int n = grid.size();
    const PotentialSamples ps(p, grid);
    MatrixXd m(n, n);
    const double c = 1.0 / (4.0 * M_PI);
    for (int j = 0; j < n; ++j) {
        const double colfac = ps.w[j] * ps.s[j] * grid.weights[j];
        for (int i = 0; i < n; ++i) {
            if (i == j)
                continue;
            if (ps.s[i] == 0.0 || colfac == 0.0) {
                m(i, j) = 0.0;
                continue;
            }
            const double d = (grid.nodes[i] - grid.nodes[j]).norm();
            m(i, j) = c * ps.s[i] * std::exp(-kappa * d) / d * colfac;
        }
        // Exact ball integral of e^{-kappa|x|}/|x|: 4 pi (1 - e^{-kappa rho}(1 + kappa rho))/kappa^2.
        const double rho = std::cbrt(3.0 * diagonal_cell_volume(grid, j, rule) / (4.0 * M_PI));
        const double cell = 4.0 * M_PI * (1.0 - std::exp(-kappa * rho) * (1.0 + kappa * rho)) /
                            (kappa * kappa);
        m(j, j) = c * std::abs(ps.v[j]) * ps.w[j] * cell;
    }
    return m;
}

struct BoundState {
    double kappa;  // det(I+K(i kappa)) = 0 location
    double energy; // -kappa^2
};

// Scans det(I+K(i kappa)) for sign changes over [kappa_min, kappa_max] and
// refines each bracket by bisection. Empty result means no bound state.
inline std::vector<BoundState> bound_state_scan(const Potential& p, const VolumeGrid& grid,
                                                double kappa_min, double kappa_max, int n_samples,
                                                DiagonalRule rule = DiagonalRule::EqualVolumeShell)
{
    if (!(0.0 < kappa_min && kappa_min < kappa_max))
        throw std::invalid_argument("bound_state_scan: need 0 < kappa_min < kappa_max");
    if (n_samples < 2)
        throw std::invalid_argument("bound_state_scan: need at least 2 samples");

    auto det_sign_at = [&](double kappa) {
        MatrixXd a = assemble_kernel_negative_energy(p, grid, kappa, rule);
        a.diagonal().array() += 1.0;
        return RealLu(std::move(a)).det_sign();
    };

    std::vector<BoundState> states;
    const double step = (kappa_max - kappa_min) / (n_samples - 1);
    int prev_sign = det_sign_at(kappa_min);
    double prev_kappa = kappa_min;
    for (int i = 1; i < n_samples; ++i) {
        const double kappa = kappa_min + i * step;
        const int sign = det_sign_at(kappa);
        if (sign != 0 && prev_sign != 0 && sign != prev_sign) {
            double lo = prev_kappa, hi = kappa;
            int lo_sign = prev_sign;
            for (int it = 0; it < 40 && (hi - lo) > 1e-10 * kappa_max; ++it) {
                const double mid = 0.5 * (lo + hi);
                const int ms = det_sign_at(mid);
                if (ms == 0) {
                    lo = hi = mid;
                    break;
                }
                if (ms == lo_sign)
                    lo = mid;
                else
                    hi = mid;
            }
            const double root = 0.5 * (lo + hi);
            states.push_back({root, -root * root});
        }
        prev_sign = sign;
        prev_kappa = kappa;
    }
    return states;
}

// Frobenius (Hilbert-Schmidt) estimates of K and of F*F. Both are computed
// as weighted double sums of the squared kernel modulus, independent of the
// assembled matrix. The F*F kernel is finite on the diagonal, where
// sin(k|r-s|)/|r-s| -> k.
inline std::pair<double, double> hs_norms(const Potential& p, const VolumeGrid& grid,
                                          double lambda,
                                          DiagonalRule rule = DiagonalRule::EqualVolumeShell)
{
    const double k = std::sqrt(lambda);
    const int n = grid.size();
    const PotentialSamples ps(p, grid);

    double k_sum = 0.0, ff_sum = 0.0;
    const double ck = 1.0 / (4.0 * M_PI);
    const double cff = 1.0 / (4.0 * M_PI * M_PI);
    for (int i = 0; i < n; ++i) {
        if (ps.v[i] == 0.0)
            continue;
        const double absvi = std::abs(ps.v[i]);
        for (int j = 0; j < n; ++j) {
            if (j == i || ps.v[j] == 0.0)
                continue;
            const double d2 = (grid.nodes[i] - grid.nodes[j]).squaredNorm();
            const double d = std::sqrt(d2);
            const double ww = grid.weights[i] * grid.weights[j];
            const double vv = absvi * std::abs(ps.v[j]);
            k_sum += ww * ck * ck * vv / d2;
            const double sd = std::sin(k * d) / d;
            ff_sum += ww * cff * cff * vv * sd * sd;
        }
        // Diagonal cells: |K|^2 has the 1/|r-s|^2 singularity, integrated
        // exactly over the equal-volume sphere (4 pi rho); F*F is smooth.
        const double wi = grid.weights[i];
        const double cell = diagonal_cell_volume(grid, i, rule);
        const double rho = std::cbrt(3.0 * cell / (4.0 * M_PI));
        k_sum += wi * ck * ck * absvi * absvi * 4.0 * M_PI * rho;
        ff_sum += wi * wi * cff * cff * absvi * absvi * k * k;
    }
    return {std::sqrt(k_sum), std::sqrt(ff_sum)};
}

struct FarFieldRow {
    double radius;
    double scaled_residual; // R * max |phi - plane - f e^{ikR}/R|
};

} // namespace scat
