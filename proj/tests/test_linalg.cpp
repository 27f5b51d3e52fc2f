#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "scat/linalg.hpp"

using namespace scat;

namespace {

MatrixXcd random_complex(int n, unsigned seed)
{
    std::mt19937 rng(seed);
    std::uniform_real_distribution<double> uni(-1.0, 1.0);
    MatrixXcd a(n, n);
    for (int j = 0; j < n; ++j)
        for (int i = 0; i < n; ++i)
            a(i, j) = Complex(uni(rng), uni(rng));
    return a;
}

} // namespace

TEST_CASE("complex LU solves against Eigen", "[linalg]")
{
    const MatrixXcd a = random_complex(40, 7);
    const MatrixXcd b = random_complex(40, 8).leftCols(3);
    const ComplexLu lu(a);
    CHECK_FALSE(lu.exactly_singular());
    const MatrixXcd x = lu.solve(b);
    CHECK((a * x - b).norm() / b.norm() < 1e-12);
    // Adjoint system.
    const MatrixXcd y = lu.solve(b, 'C');
    CHECK((a.adjoint() * y - b).norm() / b.norm() < 1e-12);
}

TEST_CASE("real LU determinant sign", "[linalg]")
{
    MatrixXd a = MatrixXd::Identity(5, 5);
    CHECK(RealLu(a).det_sign() == 1);
    a(0, 0) = -3.0;
    CHECK(RealLu(a).det_sign() == -1);
    a(1, 1) = -2.0;
    CHECK(RealLu(a).det_sign() == 1);
    // Singular matrix reports sign 0.
    a.col(2) = a.col(3);
    CHECK(RealLu(a).det_sign() == 0);
}

TEST_CASE("extreme singular value estimates match full SVD", "[linalg]")
{
    const MatrixXcd a =
        MatrixXcd::Identity(30, 30) + 0.4 * random_complex(30, 11); // well conditioned
    Eigen::JacobiSVD<MatrixXcd> svd(a);
    const double smax = svd.singularValues()(0);
    const double smin = svd.singularValues()(29);

    CHECK(std::abs(sigma_max_estimate(a, 100) - smax) / smax < 1e-6);
    CHECK(std::abs(sigma_min_estimate(ComplexLu(a), 100) - smin) / smin < 1e-6);
}

TEST_CASE("real inverse iteration agrees with SVD", "[linalg]")
{
    std::mt19937 rng(3);
    std::uniform_real_distribution<double> uni(-1.0, 1.0);
    MatrixXd a = MatrixXd::Identity(25, 25);
    for (int j = 0; j < 25; ++j)
        for (int i = 0; i < 25; ++i)
            a(i, j) += 0.3 * uni(rng);
    Eigen::JacobiSVD<MatrixXd> svd(a);
    const double smin = svd.singularValues()(24);
    CHECK(std::abs(sigma_min_estimate(RealLu(a), 100) - smin) / smin < 1e-6);
}

TEST_CASE("non-square matrices are rejected", "[linalg]")
{
    CHECK_THROWS_AS(ComplexLu(MatrixXcd::Zero(3, 4)), std::invalid_argument);
    CHECK_THROWS_AS(RealLu(MatrixXd::Zero(2, 5)), std::invalid_argument);
}
