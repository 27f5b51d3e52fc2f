#pragma once

// Thin LAPACK layer for the dense solves. Matrices live in Eigen
// (column-major) storage; factorizations call LAPACKE in place. The extreme
// singular values of I+K are estimated by power / inverse-power iteration on
// the factorization, which at N ~ 7000 is far cheaper than a full SVD.

#include <Eigen/Dense>
#include <complex>
#include <stdexcept>
#include <vector>

#define LAPACK_COMPLEX_CUSTOM
#define lapack_complex_float std::complex<float>
#define lapack_complex_double std::complex<double>
#include <lapacke.h>

namespace scat {

using Complex = std::complex<double>;
using MatrixXcd = Eigen::MatrixXcd;
using MatrixXd = Eigen::MatrixXd;
using VectorXcd = Eigen::VectorXcd;
using VectorXd = Eigen::VectorXd;

// In-place LU (partial pivoting) of a complex matrix, with multi-RHS solves
// for A x = b and the adjoint system A^H x = b.
class ComplexLu {
public:
    explicit ComplexLu(MatrixXcd matrix) : lu_(std::move(matrix)), pivots_(lu_.rows())
    {
        if (lu_.rows() != lu_.cols())
            throw std::invalid_argument("ComplexLu: matrix must be square");
        const lapack_int n = static_cast<lapack_int>(lu_.rows());
        const lapack_int info =
            LAPACKE_zgetrf(LAPACK_COL_MAJOR, n, n, lu_.data(), n, pivots_.data());
        if (info < 0)
            throw std::runtime_error("zgetrf: illegal argument");
        singular_ = info > 0;
    }

    bool exactly_singular() const { return singular_; }
    Eigen::Index size() const { return lu_.rows(); }

    MatrixXcd solve(MatrixXcd rhs, char trans = 'N') const
    {
        if (singular_)
            throw std::runtime_error("ComplexLu::solve: factorization is singular");
        const lapack_int n = static_cast<lapack_int>(lu_.rows());
        const lapack_int m = static_cast<lapack_int>(rhs.cols());
        const lapack_int info = LAPACKE_zgetrs(LAPACK_COL_MAJOR, trans, n, m, lu_.data(), n,
                                               pivots_.data(), rhs.data(), n);
        if (info != 0)
            throw std::runtime_error("zgetrs failed");
        return rhs;
    }

private:
    MatrixXcd lu_;
    std::vector<lapack_int> pivots_;
    bool singular_ = false;
};

// Real variant; also exposes sign(det) from the pivot pattern, which the
// bound-state scan uses as an under/overflow-free singularity detector.
class RealLu {
public:
    explicit RealLu(MatrixXd matrix) : lu_(std::move(matrix)), pivots_(lu_.rows())
    {
        if (lu_.rows() != lu_.cols())
            throw std::invalid_argument("RealLu: matrix must be square");
        const lapack_int n = static_cast<lapack_int>(lu_.rows());
        const lapack_int info =
            LAPACKE_dgetrf(LAPACK_COL_MAJOR, n, n, lu_.data(), n, pivots_.data());
        if (info < 0)
            throw std::runtime_error("dgetrf: illegal argument");
        singular_ = info > 0;
    }

    bool exactly_singular() const { return singular_; }
    Eigen::Index size() const { return lu_.rows(); }

    int det_sign() const
    {
        if (singular_)
            return 0;
        int sign = 1;
        for (Eigen::Index i = 0; i < lu_.rows(); ++i) {
            if (pivots_[static_cast<std::size_t>(i)] != static_cast<lapack_int>(i) + 1)
                sign = -sign;
            if (lu_(i, i) < 0.0)
                sign = -sign;
        }
        return sign;
    }

    MatrixXd solve(MatrixXd rhs, char trans = 'N') const
    {
        if (singular_)
            throw std::runtime_error("RealLu::solve: factorization is singular");
        const lapack_int n = static_cast<lapack_int>(lu_.rows());
        const lapack_int m = static_cast<lapack_int>(rhs.cols());
        const lapack_int info = LAPACKE_dgetrs(LAPACK_COL_MAJOR, trans, n, m, lu_.data(), n,
                                               pivots_.data(), rhs.data(), n);
        if (info != 0)
            throw std::runtime_error("dgetrs failed");
        return rhs;
    }

private:
    MatrixXd lu_;
    std::vector<lapack_int> pivots_;
    bool singular_ = false;
};

// Deterministic non-symmetric start vector for the power iterations.
template <typename Vector> Vector iteration_seed(Eigen::Index n)
{
    Vector v(n);
    for (Eigen::Index i = 0; i < n; ++i)
        v[i] = 1.0 + 0.5 * std::cos(static_cast<double>(i + 1));
    return v / v.norm();
}

// Largest singular value of A by power iteration on A^H A.
inline double sigma_max_estimate(const MatrixXcd& a, int iters = 30)
{
    if (a.rows() == 0)
        return 0.0;
    VectorXcd v = iteration_seed<VectorXcd>(a.cols());
    double s = 0.0;
    for (int it = 0; it < iters; ++it) {
        VectorXcd w = a.adjoint() * (a * v);
        const double nw = w.norm();
        if (nw == 0.0)
            return 0.0;
        s = std::sqrt(nw);
        v = w / nw;
    }
    return s;
}

// Smallest singular value of the factored matrix by inverse power iteration:
// sigma_min(A) = 1 / sigma_max(A^{-1}), driven through the LU solves.
inline double sigma_min_estimate(const ComplexLu& lu, int iters = 30)
{
    if (lu.exactly_singular())
        return 0.0;
    VectorXcd v = iteration_seed<VectorXcd>(lu.size());
    double inv_norm = 0.0;
    for (int it = 0; it < iters; ++it) {
        VectorXcd w = lu.solve(lu.solve(v), 'C');
        const double nw = w.norm();
        if (nw == 0.0)
            return 0.0;
        inv_norm = std::sqrt(nw);
        v = w / nw;
    }
    return 1.0 / inv_norm;
}

inline double sigma_min_estimate(const RealLu& lu, int iters = 30)
{
    if (lu.exactly_singular())
        return 0.0;
    VectorXd v = iteration_seed<VectorXd>(lu.size());
    double inv_norm = 0.0;
    for (int it = 0; it < iters; ++it) {
        VectorXd w = lu.solve(lu.solve(v), 'T');
        const double nw = w.norm();
        if (nw == 0.0)
            return 0.0;
        inv_norm = std::sqrt(nw);
        v = w / nw;
    }
    return 1.0 / inv_norm;
}

} // namespace scat
