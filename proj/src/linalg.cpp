#include "hm/linalg.hpp"

#include "hm/error.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace hm {

std::string_view to_string(Errc code) noexcept {
    switch (code) {
        case Errc::NonSymmetric: return "NonSymmetric";
        case Errc::IndefiniteOperator: return "IndefiniteOperator";
        case Errc::DimensionMismatch: return "DimensionMismatch";
        case Errc::NonFinite: return "NonFinite";
        case Errc::StepCountOverflow: return "StepCountOverflow";
        case Errc::InvalidParams: return "InvalidParams";
        case Errc::NegativeDiscriminant: return "NegativeDiscriminant";
        case Errc::SingularIndicator: return "SingularIndicator";
        case Errc::InsufficientData: return "InsufficientData";
        case Errc::ConfigError: return "ConfigError";
    }
    return "Unknown";
}

namespace linalg {

SymmetricOperator::SymmetricOperator(const Matrix& entries) {
    if (entries.rows() == 0 || entries.rows() != entries.cols()) {
        std::ostringstream msg;
        msg << "operator must be square and nonempty, got " << entries.rows() << "x"
            << entries.cols();
        throw Error(Errc::DimensionMismatch, msg.str());
    }
    if (!entries.allFinite()) {
        throw Error(Errc::NonFinite, "operator entries contain NaN or Inf");
    }

    const double scale = entries.cwiseAbs().maxCoeff();
    const double asym = (entries - entries.transpose()).cwiseAbs().maxCoeff();
    if (asym > kSymmetryTol * scale) {
        std::ostringstream msg;
        msg << "max |A_ij - A_ji| = " << asym << " exceeds " << kSymmetryTol << " * " << scale;
        throw Error(Errc::NonSymmetric, msg.str());
    }

    entries_ = 0.5 * (entries + entries.transpose());
    entries_ext_ = entries_.cast<long double>();

    Eigen::SelfAdjointEigenSolver<Matrix> solver(entries_);
    if (solver.info() != Eigen::Success) {
        throw Error(Errc::NonFinite, "symmetric eigensolver did not converge");
    }
    raw_eigenvalues_ = solver.eigenvalues();
    eigenvectors_ = solver.eigenvectors();

    const double top = raw_eigenvalues_(raw_eigenvalues_.size() - 1);
    const double floor = -kPsdClampTol * std::max(1.0, top);
    if (raw_eigenvalues_(0) < floor) {
        std::ostringstream msg;
        msg << "smallest eigenvalue " << raw_eigenvalues_(0) << " is below the clamp threshold "
            << floor;
        throw Error(Errc::IndefiniteOperator, msg.str());
    }
    eigenvalues_ = raw_eigenvalues_.cwiseMax(0.0);
}

Vector SymmetricOperator::apply(const Vector& v) const {
    if (v.size() != dim()) {
        throw Error(Errc::DimensionMismatch, "vector length does not match operator dimension");
    }
    return entries_ * v;
}

ExtVector SymmetricOperator::apply(const ExtVector& v) const {
    if (v.size() != dim()) {
        throw Error(Errc::DimensionMismatch, "vector length does not match operator dimension");
    }
    return entries_ext_ * v;
}

Vector SymmetricOperator::to_modal(const Vector& v) const {
    if (v.size() != dim()) {
        throw Error(Errc::DimensionMismatch, "vector length does not match operator dimension");
    }
    return eigenvectors_.transpose() * v;
}

Vector SymmetricOperator::from_modal(const Vector& a) const {
    if (a.size() != dim()) {
        throw Error(Errc::DimensionMismatch, "vector length does not match operator dimension");
    }
    return eigenvectors_ * a;
}

SymmetricOperator spectral_decompose(const Matrix& entries) {
    return SymmetricOperator(entries);
}

Vector expm_apply(const SymmetricOperator& A, double t, const Vector& v) {
    if (!(t >= 0.0)) {
        throw Error(Errc::InvalidParams, "expm_apply requires t >= 0");
    }
    Vector modal = A.to_modal(v);
    if (t == 0.0) {
        return v;
    }
    modal.array() *= (-t * A.eigenvalues().array()).exp();
    return A.from_modal(modal);
}

double phi(double t) noexcept {
    if (t == 0.0) {
        return 1.0;
    }
    if (std::abs(t) < 1e-4) {
        return 1.0 + t * (1.0 / 2.0 + t * (1.0 / 6.0 + t / 24.0));
    }
    return std::expm1(t) / t;
}

double two_norm(const Matrix2& M) noexcept {
    const double a = M(0, 0);
    const double b = M(0, 1);
    const double c = M(1, 0);
    const double d = M(1, 1);
    const double f = a * a + b * b + c * c + d * d;
    const double det = a * d - b * c;
    // f - 2|det| written as a sum of squares so it never goes negative.
    const double f_minus = det >= 0.0 ? (a - d) * (a - d) + (b + c) * (b + c)
                                      : (a + d) * (a + d) + (b - c) * (b - c);
    const double f_plus = f + 2.0 * std::abs(det);
    const double root = std::sqrt(f_minus * f_plus);
    return std::sqrt(0.5 * (f + root));
}

double two_norm(const Matrix& M) {
    if (M.size() == 0) {
        return 0.0;
    }
    if (M.rows() == 2 && M.cols() == 2) {
        return two_norm(Matrix2(M));
    }
    Eigen::JacobiSVD<Matrix> svd(M);
    return svd.singularValues()(0);
}

}  // namespace linalg
}  // namespace hm
