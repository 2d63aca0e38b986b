#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "hm/error.hpp"
#include "hm/linalg.hpp"
#include "hm/problems.hpp"
#include "support.hpp"

#include <cmath>
#include <numbers>

using namespace hm;
using namespace hm::linalg;

TEST_CASE("scalar operator decomposes to itself") {
    Matrix m(1, 1);
    m << 1000.0;
    const auto A = spectral_decompose(m);
    CHECK(A.dim() == 1);
    CHECK(A.eigenvalues()(0) == 1000.0);
    CHECK(std::abs(A.eigenvectors()(0, 0)) == doctest::Approx(1.0));
    CHECK(A.omega() == 1000.0);
    CHECK(A.lambda_max() == 1000.0);
}

TEST_CASE("diagonal operator keeps identity eigenvectors") {
    Matrix m = Matrix::Zero(2, 2);
    m(1, 1) = 3.0;
    const auto A = spectral_decompose(m);
    CHECK(A.eigenvalues()(0) == 0.0);
    CHECK(A.eigenvalues()(1) == 3.0);
    CHECK((A.eigenvectors().cwiseAbs() - Matrix::Identity(2, 2)).norm() < 1e-15);
}

TEST_CASE("validation errors") {
    auto code_of = [](const Matrix& m) {
        try {
            SymmetricOperator op(m);
        } catch (const Error& e) {
            return e.code();
        }
        return Errc::ConfigError;
    };
    Matrix ns(2, 2);
    ns << 1.0, 0.5, 0.0, 1.0;
    CHECK(code_of(ns) == Errc::NonSymmetric);

    Matrix indef(2, 2);
    indef << 1.0, 0.0, 0.0, -1e-3;
    CHECK(code_of(indef) == Errc::IndefiniteOperator);

    CHECK(code_of(Matrix(2, 3)) == Errc::DimensionMismatch);
    CHECK(code_of(Matrix(0, 0)) == Errc::DimensionMismatch);

    Matrix nan = Matrix::Identity(2, 2);
    nan(0, 0) = std::nan("");
    CHECK(code_of(nan) == Errc::NonFinite);
}

TEST_CASE("tiny negative eigenvalues are clamped") {
    Matrix m = Matrix::Zero(2, 2);
    m(0, 0) = -1e-13;
    m(1, 1) = 5.0;
    const SymmetricOperator A(m);
    CHECK(A.raw_eigenvalues()(0) < 0.0);
    CHECK(A.eigenvalues()(0) == 0.0);
}

TEST_CASE("heat operator matches the analytic Dirichlet spectrum") {
    for (int nx : {2, 10, 100}) {
        const auto heat = problems::build_heat1d(nx);
        const double h = heat.h;
        for (int k = 1; k <= nx; ++k) {
            const double s = std::sin(k * std::numbers::pi / (2.0 * (nx + 1)));
            const double expected = 4.0 / (h * h) * s * s;
            CHECK(testing::rel_diff(heat.op.eigenvalues()(k - 1), expected) < 1e-8);
        }
    }
}

TEST_CASE("eigenvectors are orthonormal and reconstruct A") {
    std::mt19937_64 rng(11);
    for (int trial = 0; trial < 10; ++trial) {
        const int n = 1 + static_cast<int>(rng() % 40);
        const SymmetricOperator A(testing::random_psd(n, rng, 100.0, trial % 3));
        const Matrix& Q = A.eigenvectors();
        CHECK((Q.transpose() * Q - Matrix::Identity(n, n)).norm() < 1e-12);
        const Matrix rebuilt = Q * A.raw_eigenvalues().asDiagonal() * Q.transpose();
        CHECK((rebuilt - A.entries()).norm() < 1e-11 * std::max(1.0, A.lambda_max()));
        for (Eigen::Index i = 1; i < n; ++i) {
            CHECK(A.eigenvalues()(i - 1) <= A.eigenvalues()(i));
        }
    }
}

TEST_CASE("apply and modal round trip") {
    std::mt19937_64 rng(5);
    const SymmetricOperator A(testing::random_psd(7, rng, 10.0));
    const Vector v = testing::random_vector(7, rng);
    CHECK((A.apply(v) - A.entries() * v).norm() < 1e-13);
    CHECK((A.from_modal(A.to_modal(v)) - v).norm() < 1e-13);
    const ExtVector ve = testing::to_ext(v);
    CHECK((A.apply(ve).cast<double>() - A.entries() * v).norm() < 1e-13);
    CHECK_THROWS_AS(A.apply(Vector(Vector::Zero(3))), Error);
}

TEST_CASE("expm_apply examples") {
    std::mt19937_64 rng(3);
    const SymmetricOperator A(testing::random_psd(5, rng));
    const Vector v = testing::random_vector(5, rng);
    CHECK((expm_apply(A, 0.0, v) - v).norm() < 1e-15);

    Matrix s(1, 1);
    s << 1000.0;
    Vector one = Vector::Ones(1);
    CHECK(expm_apply(SymmetricOperator(s), 1e-3, one)(0) == doctest::Approx(std::exp(-1.0)));

    Matrix d = Matrix::Zero(2, 2);
    d(1, 1) = 3.0;
    const Vector r = expm_apply(SymmetricOperator(d), 1.0, Vector::Ones(2));
    CHECK(r(0) == doctest::Approx(1.0));
    CHECK(r(1) == doctest::Approx(std::exp(-3.0)));

    CHECK_THROWS_AS(expm_apply(A, 1.0, Vector::Zero(2)), Error);
    CHECK_THROWS_AS(expm_apply(A, -1.0, v), Error);
}

TEST_CASE("expm_apply contraction and semigroup on random operators") {
    std::mt19937_64 rng(2024);
    const double tau = 3e-5;
    for (int trial = 0; trial < 20; ++trial) {
        const int n = 1 + static_cast<int>(rng() % 40);
        const SymmetricOperator A(testing::random_psd(n, rng, 1000.0, trial % 2));
        const Vector v = testing::random_vector(n, rng);
        for (double t : {0.0, tau, 10 * tau}) {
            CHECK(expm_apply(A, t, v).norm() <=
                  std::exp(-A.omega() * t) * v.norm() * (1.0 + 1e-10));
        }
        const double s = 7e-4, t = 2e-4;
        const Vector lhs = expm_apply(A, s, expm_apply(A, t, v));
        const Vector rhs = expm_apply(A, s + t, v);
        CHECK((lhs - rhs).norm() <= 1e-10 * rhs.norm() + 1e-300);
    }
}

TEST_CASE("phi") {
    CHECK(phi(0.0) == 1.0);
    CHECK(phi(1.0) == doctest::Approx(std::numbers::e - 1.0).epsilon(1e-14));
    const double omega = 1000.0, s = 1e-3;
    CHECK(s * phi(-omega * s) == doctest::Approx((1.0 - std::exp(-1.0)) / omega).epsilon(1e-14));
    CHECK(std::abs(phi(1e-5) - phi(-1e-5)) < 2e-5);
    // Branch agreement at the switch point, against the direct quotient.
    for (double t : {1e-4, -1e-4}) {
        const double direct = std::expm1(t) / t;
        const double below = phi(std::nextafter(t, 0.0));
        CHECK(std::abs(phi(t) - direct) < 1e-12);
        CHECK(std::abs(below - direct) < 1e-12);
    }
    // phi(t) = sum t^k/(k+1)! checked against a long series.
    for (double t : {-3.0, -0.5, -1e-3, 2e-3, 0.7}) {
        double term = 1.0, sum = 0.0;
        for (int k = 0; k < 60; ++k) {
            sum += term;
            term *= t / (k + 2);
        }
        CHECK(phi(t) == doctest::Approx(sum).epsilon(1e-14));
    }
}

TEST_CASE("two_norm examples") {
    CHECK(two_norm(Matrix2(Matrix2::Identity())) == doctest::Approx(1.0));
    Matrix2 d;
    d << 3.0, 0.0, 0.0, -5.0;
    CHECK(two_norm(d) == doctest::Approx(5.0));
    Matrix2 j;
    j << 0.0, 1.0, 0.0, 0.0;
    CHECK(two_norm(j) == doctest::Approx(1.0));
    CHECK(two_norm(Matrix2(Matrix2::Zero())) == 0.0);
    Matrix rect(2, 3);
    rect << 1, 0, 0, 0, 2, 0;
    CHECK(two_norm(rect) == doctest::Approx(2.0));
}

TEST_CASE("2x2 closed form agrees with power iteration") {
    std::mt19937_64 rng(77);
    std::uniform_real_distribution<double> unif(-10.0, 10.0);
    for (int trial = 0; trial < 200; ++trial) {
        Matrix2 M;
        M << unif(rng), unif(rng), unif(rng), unif(rng);
        const Matrix2 G = M.transpose() * M;
        Eigen::Vector2d x(1.0, 0.37);
        double sigma2 = 0.0;
        for (int it = 0; it < 2000; ++it) {
            const Eigen::Vector2d y = G * x;
            sigma2 = x.dot(y) / x.dot(x);
            x = y.normalized();
        }
        CHECK(testing::rel_diff(two_norm(M), std::sqrt(sigma2)) < 1e-10);
        CHECK(testing::rel_diff(two_norm(M), two_norm(Matrix(M))) < 1e-12);
    }
}
