#pragma once

#include <Eigen/Dense>

namespace hm {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;
using Matrix2 = Eigen::Matrix2d;

/// Extended-precision vector used for the three-level scheme state.
using ExtVector = Eigen::Matrix<long double, Eigen::Dynamic, 1>;
using ExtMatrix = Eigen::Matrix<long double, Eigen::Dynamic, Eigen::Dynamic>;

namespace linalg {

/// Relative symmetry tolerance: max|A_ij - A_ji| <= tol * max|A_ij|.
inline constexpr double kSymmetryTol = 1e-12;
/// Eigenvalues down to -kPsdClampTol * max(1, lambda_max) are clamped to zero.
inline constexpr double kPsdClampTol = 1e-10;

/// Dense symmetric positive semidefinite matrix with its cached spectral
/// decomposition A = Q diag(lambda) Q^T. Immutable after construction.
class SymmetricOperator {
public:
    /// Validates symmetry and semidefiniteness, then decomposes.
    /// Throws NonSymmetric, IndefiniteOperator or DimensionMismatch.
    explicit SymmetricOperator(const Matrix& entries);

    Eigen::Index dim() const noexcept { return entries_.rows(); }
    const Matrix& entries() const noexcept { return entries_; }

    /// Ascending eigenvalues, clamped at zero.
    const Vector& eigenvalues() const noexcept { return eigenvalues_; }
    /// Ascending eigenvalues as returned by the eigensolver, before clamping.
    const Vector& raw_eigenvalues() const noexcept { return raw_eigenvalues_; }
    /// Orthonormal eigenvectors, one per column, ordered like eigenvalues().
    const Matrix& eigenvectors() const noexcept { return eigenvectors_; }

    double omega() const noexcept { return eigenvalues_(0); }
    double lambda_max() const noexcept { return eigenvalues_(dim() - 1); }
    /// Spectral norm; equals lambda_max for a semidefinite operator.
    double norm() const noexcept { return lambda_max(); }

    Vector apply(const Vector& v) const;
    ExtVector apply(const ExtVector& v) const;

    /// Coordinates in the eigenbasis, Q^T v.
    Vector to_modal(const Vector& v) const;
    /// Q a.
    Vector from_modal(const Vector& a) const;

private:
    Matrix entries_;
    ExtMatrix entries_ext_;
    Vector raw_eigenvalues_;
    Vector eigenvalues_;
    Matrix eigenvectors_;
};

SymmetricOperator spectral_decompose(const Matrix& entries);

/// exp(-t A) v evaluated through the cached eigendecomposition.
Vector expm_apply(const SymmetricOperator& A, double t, const Vector& v);

/// (e^t - 1) / t with phi(0) = 1; a short Taylor series is used near zero.
double phi(double t) noexcept;

/// Largest singular value.
double two_norm(const Matrix& M);
/// Closed form for 2x2 matrices.
double two_norm(const Matrix2& M) noexcept;

}  // namespace linalg
}  // namespace hm
