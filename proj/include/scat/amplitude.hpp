#pragma once

// Stationary scattering amplitude f(w, w', lambda) on sphere-grid direction
// pairs, the first-order Born evaluation used as an independent oracle, and
// the far-field asymptotics check.
//
// Convention, fixed throughout: rows are outgoing directions w_a, columns are
// incident directions w'_b.

#include <Eigen/Dense>
#include <cmath>
#include <complex>
#include <stdexcept>
#include <vector>

#include "scat/ls_solver.hpp"
#include "scat/potential.hpp"
#include "scat/quadrature.hpp"

namespace scat {

struct AmplitudeMatrix {
    double lambda = 0.0;
    MatrixXcd f; // A x A, entry (a, b) = f(w_a, w'_b, lambda)
};

// f(w_a, w'_b) = -(1/4pi) sum_i w_i exp(-i k r_i . w_a) W_i s_i psi_i(b),
// using V phi = W |V|^{1/2} psi so no division by |V|^{1/2} is ever needed.
inline AmplitudeMatrix scattering_amplitude(const WaveTable& wt, const Potential& p,
                                            const VolumeGrid& grid, const SphereGrid& sg)
{
    const int n = grid.size();
    const int m = sg.size();
    if (wt.psi.rows() != n || wt.psi.cols() != m)
        throw std::invalid_argument("scattering_amplitude: wave table does not match grids");

    const double k = std::sqrt(wt.lambda);
    const PotentialSamples ps(p, grid);

    // Row phase matrix E(a, i) = -(1/4pi) w_i W_i s_i exp(-i k r_i . w_a);
    // then f = E * psi as one dense product.
    MatrixXcd e(m, n);
    const double c = -1.0 / (4.0 * M_PI);
    for (int i = 0; i < n; ++i) {
        const double fac = c * grid.weights[i] * ps.w[i] * ps.s[i];
        if (fac == 0.0) {
            e.col(i).setZero();
            continue;
        }
        for (int a = 0; a < m; ++a)
            e(a, i) = std::polar(fac, -k * grid.nodes[i].dot(sg.directions[a]));
    }

    AmplitudeMatrix out;
    out.lambda = wt.lambda;
    out.f = e * wt.psi;
    return out;
}

// First Born approximation: the amplitude with phi replaced by the incident
// plane wave. For Yukawa this has the closed form -g / (q^2 + mu^2).
inline Complex born_amplitude(const Potential& p, const Vec3& w_out, const Vec3& w_in,
                              double lambda, const VolumeGrid& grid)
{
    if (lambda <= 0.0)
        throw std::invalid_argument("born_amplitude: lambda must be positive");
    const double k = std::sqrt(lambda);
    Complex acc = 0.0;
    for (int i = 0; i < grid.size(); ++i) {
        const double v = p.evaluate(grid.nodes[i]);
        if (v == 0.0)
            continue;
        const double phase = k * grid.nodes[i].dot(w_in - w_out);
        acc += grid.weights[i] * v * std::polar(1.0, phase);
    }
    return -acc / (4.0 * M_PI);
}

struct DifferentialCrossSectionRow {
    Vec3 direction;
    double value; // |f(w_a, w'_b)|^2
};

inline std::vector<DifferentialCrossSectionRow>
differential_cross_section(const AmplitudeMatrix& am, const SphereGrid& sg, int incident_index)
{
    if (incident_index < 0 || incident_index >= am.f.cols())
        throw std::out_of_range("differential_cross_section: bad incident index");
    std::vector<DifferentialCrossSectionRow> rows;
    rows.reserve(sg.size());
    for (int a = 0; a < sg.size(); ++a)
        rows.push_back({sg.directions[a], std::norm(am.f(a, incident_index))});
    return rows;
}

// Far-field check of the outgoing-wave asymptotics: evaluates phi(R w_a, k_b)
// through the LS representation (quadrature over the stored psi), subtracts
// the plane wave and f e^{ikR}/R, and reports R * max |residual| per probe
// radius. The column must decrease with R.
inline std::vector<FarFieldRow> farfield_check(const WaveTable& wt, const AmplitudeMatrix& am,
                                               const Potential& p, const VolumeGrid& grid,
                                               const SphereGrid& sg,
                                               const std::vector<double>& probe_radii,
                                               const std::vector<int>& incident_columns = {0})
{
    const double k = std::sqrt(wt.lambda);
    const PotentialSamples ps(p, grid);
    const int n = grid.size();

    std::vector<FarFieldRow> rows;
    rows.reserve(probe_radii.size());
    for (double radius : probe_radii) {
        if (radius <= p.support_radius())
            throw std::invalid_argument("farfield_check: probe radius inside potential support");
        double worst = 0.0;
        for (int b : incident_columns) {
            const Vec3& dir_in = sg.directions[b];
            for (int a = 0; a < sg.size(); ++a) {
                const Vec3 r = radius * sg.directions[a];
                Complex scattered = 0.0;
                for (int i = 0; i < n; ++i) {
                    if (ps.s[i] == 0.0)
                        continue;
                    const double d = (r - grid.nodes[i]).norm();
                    scattered -= grid.weights[i] / (4.0 * M_PI) * std::polar(1.0, k * d) / d *
                                 ps.w[i] * ps.s[i] * wt.psi(i, b);
                }
                const Complex asymptotic =
                    am.f(a, b) * std::polar(1.0 / radius, k * radius);
                worst = std::max(worst, std::abs(scattered - asymptotic));
            }
        }
        rows.push_back({radius, radius * worst});
    }
    return rows;
}

} // namespace scat
