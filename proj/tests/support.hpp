#pragma once

#include "hm/linalg.hpp"

#include <random>

namespace hm::testing {

/// Random symmetric PSD matrix Q diag(d) Q^T with d uniform in [0, scale]
/// and Q from a Householder QR of a Gaussian matrix. `zero_modes` of the
/// diagonal entries are forced to zero.
inline Matrix random_psd(int n, std::mt19937_64& rng, double scale = 1.0, int zero_modes = 0) {
    std::normal_distribution<double> gauss;
    std::uniform_real_distribution<double> unif(0.0, scale);
    Matrix G(n, n);
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
            G(i, j) = gauss(rng);
        }
    }
    const Matrix Q = Eigen::HouseholderQR<Matrix>(G).householderQ();
    Vector d(n);
    for (int i = 0; i < n; ++i) {
        d(i) = i < zero_modes ? 0.0 : unif(rng);
    }
    Matrix A = Q * d.asDiagonal() * Q.transpose();
    return 0.5 * (A + A.transpose());
}

inline Vector random_vector(int n, std::mt19937_64& rng, double lo = -1.0, double hi = 1.0) {
    std::uniform_real_distribution<double> unif(lo, hi);
    Vector v(n);
    for (int i = 0; i < n; ++i) {
        v(i) = unif(rng);
    }
    return v;
}

inline ExtVector to_ext(const Vector& v) { return v.cast<long double>(); }

inline double rel_diff(double a, double b) {
    const double scale = std::max(std::abs(a), std::abs(b));
    return scale == 0.0 ? 0.0 : std::abs(a - b) / scale;
}

}  // namespace hm::testing
