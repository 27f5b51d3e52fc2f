#pragma once

// Discretized T(lambda) and S(lambda) operators on the sphere, the spectral
// decomposition of S, the ergodic reconstruction of the amplitude from the
// eigenpairs, and the spectral cross sections.
//
// S is held in weight-symmetrized coordinates,
//   S_ab = delta_ab - 2 pi i sqrt(mu_a) t(w_a, w_b) sqrt(mu_b),
// so near-unitarity is a property of the plain matrix. The eigendecomposition
// keeps the biorthogonal (dual) basis alongside the eigenfunctions: with it
// the spectral resolution of S - I is exact to roundoff even at nonzero
// unitarity defect, which is what the ergodic identity checks require. For a
// normal S the dual basis coincides with the eigenfunctions; the distance
// between the two is reported as self_duality_defect.

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <complex>
#include <numeric>
#include <stdexcept>
#include <vector>

#include "scat/amplitude.hpp"
#include "scat/quadrature.hpp"
#include "scat/specfun.hpp"

namespace scat {

// T kernel on the sphere: t = mu^2 T(w, w', lambda) = -(sqrt(lambda)/4 pi^2) f.
inline MatrixXcd assemble_T(const AmplitudeMatrix& am)
{
    return (-std::sqrt(am.lambda) / (4.0 * M_PI * M_PI)) * am.f;
}

struct SOperator {
    double lambda = 0.0;
    MatrixXcd s;                   // weight-symmetrized coordinates
    double unitarity_defect = 0.0; // || S^H S - I ||_2
};

inline SOperator assemble_S(const MatrixXcd& t, const SphereGrid& sg, double lambda)
{
    const int a_count = sg.size();
    if (t.rows() != a_count || t.cols() != a_count)
        throw std::invalid_argument("assemble_S: T kernel does not match sphere grid");

    VectorXd sqw(a_count);
    for (int a = 0; a < a_count; ++a)
        sqw[a] = std::sqrt(sg.weights[a]);

    SOperator op;
    op.lambda = lambda;
    op.s = MatrixXcd::Identity(a_count, a_count) -
           Complex(0.0, 2.0 * M_PI) * (sqw.asDiagonal() * t * sqw.asDiagonal());

    const MatrixXcd gram = op.s.adjoint() * op.s - MatrixXcd::Identity(a_count, a_count);
    Eigen::SelfAdjointEigenSolver<MatrixXcd> es(gram, Eigen::EigenvaluesOnly);
    op.unitarity_defect = es.eigenvalues().cwiseAbs().maxCoeff();
    return op;
}

struct SMatrixSpectrum {
    double lambda = 0.0;
    VectorXcd nu;            // eigenvalues, |nu_j| ~ 1
    MatrixXcd g;             // column j: G_j(w_a), unweighted coordinates,
                             // orthonormalized in the weighted inner product
    MatrixXcd g_raw;         // raw eigenfunctions (weighted-unit norm)
    MatrixXcd g_dual;        // biorthogonal partners of g_raw
    std::vector<double> mu;  // sphere weights of the producing grid
    double self_duality_defect = 0.0; // max_j || dual_j - raw_j ||, normality measure

    int size() const { return static_cast<int>(nu.size()); }
};

// Full eigendecomposition of S. Eigenvectors are mapped to unweighted
// coordinates G_j(w_a) = v_j(a) / sqrt(mu_a). The reported G set is the
// closest weighted-orthonormal basis (Loewdin symmetric orthogonalization of
// the eigenvector matrix); the raw/dual pair is kept for exact resolution.
//
// Eigenvalues arrive in (2l+1)-fold near-degenerate clusters; non-normal
// coupling inside a cluster makes the raw eigenvectors nearly parallel,
// driving the basis matrix close to singular (reconstruction error grows as
// residual / sigma_min(V)). Within each eigenvalue cluster any basis of the
// invariant subspace serves, so the columns are re-orthonormalized per
// cluster (QR), restoring sigma_min(V) ~ 1 at the cost of an intra-cluster
// eigenvalue spread far below the cluster threshold.
inline SMatrixSpectrum eigendecompose(const SOperator& op, const SphereGrid& sg)
{
    const int n = static_cast<int>(op.s.rows());
    Eigen::ComplexEigenSolver<MatrixXcd> es(op.s, /*computeEigenvectors=*/true);
    if (es.info() != Eigen::Success)
        throw std::runtime_error("eigendecompose: complex eigensolver failed");

    MatrixXcd v(n, n);
    VectorXcd nu(n);
    {
        // Sort eigenpairs by argument, starting after the largest angular
        // gap so a cluster straddling the branch cut stays contiguous.
        std::vector<int> idx(static_cast<std::size_t>(n));
        std::iota(idx.begin(), idx.end(), 0);
        std::sort(idx.begin(), idx.end(), [&](int a, int b) {
            return std::arg(es.eigenvalues()[a]) < std::arg(es.eigenvalues()[b]);
        });
        int cut = 0;
        double widest = -1.0;
        for (int j = 0; j < n; ++j) {
            const double gap = std::abs(es.eigenvalues()[idx[static_cast<std::size_t>(j)]] -
                                        es.eigenvalues()[idx[static_cast<std::size_t>((j + 1) % n)]]);
            if (gap > widest) {
                widest = gap;
                cut = (j + 1) % n;
            }
        }
        std::rotate(idx.begin(), idx.begin() + cut, idx.end());
        for (int j = 0; j < n; ++j) {
            v.col(j) = es.eigenvectors().col(idx[static_cast<std::size_t>(j)]);
            v.col(j) /= v.col(j).norm(); // weighted-unit: ||G_j||_mu = ||v_j||_2 = 1
            nu[j] = es.eigenvalues()[idx[static_cast<std::size_t>(j)]];
        }
    }

    // Per-cluster treatment (clusters = maximal runs with consecutive
    // eigenvalue gaps below the threshold):
    //  1. QR re-orthonormalization of the cluster columns. This restores the
    //     basis conditioning but amplifies each raw eigenvector's small
    //     out-of-cluster error by the (huge) QR coefficients, leaving the
    //     spanned subspace off by ~ eps / sigma_min(cluster basis).
    //  2. One shifted inverse-iteration step, Q <- orth((S - shift)^{-1} Q),
    //     which contracts the subspace error by (cluster radius)/(spectral
    //     separation) — measured to push the invariant-subspace residual to
    //     the 1e-14 floor in a single step.
    //  3. Rayleigh restriction M = Q^H S Q, rotated to Schur form: columns
    //     align with eigendirections inside the cluster and the eigenvalues
    //     are replaced by the (refined) diagonal of the Schur factor.
    constexpr double cluster_tol = 1e-8;
    for (int start = 0, j = 1; j <= n; ++j) {
        if (j < n && std::abs(nu[j] - nu[j - 1]) <= cluster_tol)
            continue;
        const int len = j - start;
        if (len > 1) {
            Eigen::HouseholderQR<MatrixXcd> qr(v.middleCols(start, len));
            v.middleCols(start, len) = qr.householderQ() * MatrixXcd::Identity(n, len);
        }
        const Complex shift = nu.segment(start, len).mean();
        MatrixXcd shifted = op.s;
        shifted.diagonal().array() -= shift;
        const MatrixXcd x = Eigen::PartialPivLU<MatrixXcd>(shifted).solve(v.middleCols(start, len));
        if (x.allFinite() && x.norm() > 0.0) {
            Eigen::HouseholderQR<MatrixXcd> qr(x);
            v.middleCols(start, len) = qr.householderQ() * MatrixXcd::Identity(n, len);
        }
        const MatrixXcd q = v.middleCols(start, len);
        Eigen::ComplexSchur<MatrixXcd> schur(MatrixXcd(q.adjoint() * op.s * q), true);
        v.middleCols(start, len) = q * schur.matrixU();
        nu.segment(start, len) = schur.matrixT().diagonal();
        start = j;
    }

    // Dual basis: columns of V^{-H}, so that W^H V = I.
    const MatrixXcd w = v.inverse().adjoint();

    // Loewdin orthogonalization: V = U Sigma X^H  ->  Q = U X^H.
    Eigen::BDCSVD<MatrixXcd> svd(v, Eigen::ComputeThinU | Eigen::ComputeThinV);
    const MatrixXcd q = svd.matrixU() * svd.matrixV().adjoint();

    VectorXd inv_sqw(n);
    for (int a = 0; a < n; ++a)
        inv_sqw[a] = 1.0 / std::sqrt(sg.weights[a]);

    SMatrixSpectrum spec;
    spec.lambda = op.lambda;
    spec.nu = nu;
    spec.g = inv_sqw.asDiagonal() * q;
    spec.g_raw = inv_sqw.asDiagonal() * v;
    spec.g_dual = inv_sqw.asDiagonal() * w;
    spec.mu = sg.weights;
    double defect = 0.0;
    for (int j = 0; j < n; ++j)
        defect = std::max(defect, (w.col(j) - v.col(j)).norm());
    spec.self_duality_defect = defect;
    return spec;
}

// Ergodic reconstruction of the amplitude from the spectrum:
//   f(w, w') = (2 pi / (i sqrt(lambda))) sum_j (nu_j - 1) G_j(w) conj(G~_j(w')),
// with G~ the dual partner. Exact spectral resolution of S - I on the grid.
inline AmplitudeMatrix ergodic_reconstruct(const SMatrixSpectrum& spec)
{
    const int n = spec.size();
    if (spec.g_raw.rows() != n || spec.g_dual.rows() != n)
        throw std::invalid_argument("ergodic_reconstruct: incomplete spectrum");

    const Complex c = 2.0 * M_PI / Complex(0.0, std::sqrt(spec.lambda));
    AmplitudeMatrix out;
    out.lambda = spec.lambda;
    out.f = c * (spec.g_raw * (spec.nu.array() - 1.0).matrix().asDiagonal() *
                 spec.g_dual.adjoint());
    return out;
}

// Expansion coefficients a_j(w_a) of the amplitude row over the eigenbasis,
// by weighted quadrature over the incident direction. The closed form
// (2 pi / (i sqrt(lambda))) (nu_j - 1) G_j(w_a) must match to roundoff.
inline VectorXcd expansion_coefficients(const AmplitudeMatrix& am, const SMatrixSpectrum& spec,
                                        int row)
{
    const int n = spec.size();
    if (row < 0 || row >= n)
        throw std::out_of_range("expansion_coefficients: bad row");
    VectorXcd coeffs(n);
    for (int j = 0; j < n; ++j) {
        Complex acc = 0.0;
        for (int b = 0; b < n; ++b)
            acc += spec.mu[static_cast<std::size_t>(b)] * am.f(row, b) * spec.g_raw(b, j);
        coeffs[j] = acc;
    }
    return coeffs;
}

inline VectorXcd expansion_coefficients_closed_form(const SMatrixSpectrum& spec, int row)
{
    const Complex c = 2.0 * M_PI / Complex(0.0, std::sqrt(spec.lambda));
    VectorXcd coeffs(spec.size());
    for (int j = 0; j < spec.size(); ++j)
        coeffs[j] = c * (spec.nu[j] - 1.0) * spec.g_raw(row, j);
    return coeffs;
}

// sigma = int int |f|^2 dOmega dOmega'.
inline double cross_section_double(const AmplitudeMatrix& am, const SphereGrid& sg)
{
    double acc = 0.0;
    for (int a = 0; a < sg.size(); ++a)
        for (int b = 0; b < sg.size(); ++b)
            acc += sg.weights[a] * sg.weights[b] * std::norm(am.f(a, b));
    return acc;
}

// sigma = (4 pi^2 / lambda) sum_j |nu_j - 1|^2.
inline double cross_section_spectral(const SMatrixSpectrum& spec)
{
    double acc = 0.0;
    for (int j = 0; j < spec.size(); ++j)
        acc += std::norm(spec.nu[j] - 1.0);
    return 4.0 * M_PI * M_PI / spec.lambda * acc;
}

// Max over incident directions of the optical-theorem mismatch
// |Im f(w_b, w_b) - (sqrt(lambda)/4 pi) int |f(w, w_b)|^2 dOmega(w)|,
// normalized by the cross-section scale of the same run.
inline double optical_theorem_defect(const AmplitudeMatrix& am, const SphereGrid& sg)
{
    const double k = std::sqrt(am.lambda);
    double worst = 0.0, scale = 0.0;
    for (int b = 0; b < sg.size(); ++b) {
        double sigma_b = 0.0;
        for (int a = 0; a < sg.size(); ++a)
            sigma_b += sg.weights[a] * std::norm(am.f(a, b));
        const double rhs = k / (4.0 * M_PI) * sigma_b;
        worst = std::max(worst, std::abs(am.f(b, b).imag() - rhs));
        scale = std::max(scale, std::abs(rhs));
    }
    return scale > 0.0 ? worst / scale : 0.0;
}

// Degree assignment of eigenfunctions for spherically symmetric runs, via the
// degree-l projector built from the addition theorem:
//   (P_l g)(w) = ((2l+1)/4pi) int P_l(w . w') g(w') dOmega(w').
// Returns, per eigenfunction, the degree with the largest projection weight,
// or -1 if no degree captures at least half the norm.
inline std::vector<int> assign_degrees(const SMatrixSpectrum& spec, const SphereGrid& sg,
                                       int l_max)
{
    const int n = spec.size();
    std::vector<Eigen::MatrixXd> proj; // P_l(w_a . w_b) tables
    proj.reserve(static_cast<std::size_t>(l_max) + 1);
    {
        Eigen::MatrixXd dots(n, n);
        for (int a = 0; a < n; ++a)
            for (int b = 0; b < n; ++b)
                dots(a, b) = sg.directions[a].dot(sg.directions[b]);
        for (int l = 0; l <= l_max; ++l) {
            Eigen::MatrixXd table(n, n);
            for (int a = 0; a < n; ++a)
                for (int b = 0; b < n; ++b)
                    table(a, b) = legendre_p(l, std::clamp(dots(a, b), -1.0, 1.0));
            proj.push_back(std::move(table));
        }
    }

    VectorXd mu(n);
    for (int a = 0; a < n; ++a)
        mu[a] = spec.mu[static_cast<std::size_t>(a)];

    std::vector<int> degree(static_cast<std::size_t>(n), -1);
    for (int j = 0; j < n; ++j) {
        const VectorXcd gj = spec.g.col(j);
        const VectorXcd mgj = mu.asDiagonal() * gj;
        double best = 0.0;
        int best_l = -1;
        for (int l = 0; l <= l_max; ++l) {
            const VectorXcd plg = (2.0 * l + 1.0) / (4.0 * M_PI) * (proj[static_cast<std::size_t>(l)] * mgj);
            const double power = std::abs((mgj.adjoint() * plg)(0, 0) / (mgj.adjoint() * gj)(0, 0));
            if (power > best) {
                best = power;
                best_l = l;
            }
        }
        degree[static_cast<std::size_t>(j)] = best >= 0.5 ? best_l : -1;
    }
    return degree;
}

} // namespace scat
