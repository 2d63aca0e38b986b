#include "hm/analytic.hpp"

#include "hm/error.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace hm::analytic {

HMModalSolution HMModalSolution::create(double lambda, double eps) {
    if (!(lambda > 0.0) || !(eps > 0.0) || !std::isfinite(lambda) || !std::isfinite(eps)) {
        throw Error(Errc::InvalidParams, "modal solution needs lambda > 0 and eps > 0");
    }
    const double D = 1.0 - 4.0 * lambda * eps;
    if (!(D > 0.0)) {
        std::ostringstream msg;
        msg << "D = 1 - 4*lambda*eps = " << D << " for lambda = " << lambda << ", eps = " << eps
            << "; the real two-exponential representation requires D > 0";
        throw Error(Errc::NegativeDiscriminant, msg.str());
    }
    const double root = std::sqrt(D);
    HMModalSolution sol;
    sol.lambda = lambda;
    sol.eps = eps;
    sol.discriminant = D;
    // r1 = (-1 + sqrt D)/(2 eps) = -2 lambda / (1 + sqrt D)
    sol.rate1 = -2.0 * lambda / (1.0 + root);
    sol.rate2 = -(1.0 + root) / (2.0 * eps);
    // c2 = (r1 + lambda)/(r1 - r2) with r1 + lambda = -4 lambda^2 eps / (1 + sqrt D)^2
    // and r1 - r2 = sqrt D / eps.
    const double lam_eps = lambda * eps;
    sol.c2 = -4.0 * lam_eps * lam_eps / ((1.0 + root) * (1.0 + root) * root);
    sol.c1 = 1.0 - sol.c2;
    return sol;
}

double hm_modal_exact(const HMModalSolution& sol, double t, int derivative_order) {
    if (!(t >= 0.0)) {
        throw Error(Errc::InvalidParams, "hm_modal_exact requires t >= 0");
    }
    if (derivative_order < 0 || derivative_order > 4) {
        throw Error(Errc::InvalidParams, "derivative order must be in 0..4");
    }
    if (!(sol.discriminant > 0.0)) {
        throw Error(Errc::NegativeDiscriminant, "modal solution requires D > 0");
    }
    if (derivative_order == 2) {
        // y'(0) = -lambda forces c1 r1^2 + c2 r2^2 = 0, so y'' has a single
        // coefficient and vanishes exactly at t = 0.
        return sol.c1 * sol.rate1 * sol.rate1 *
               (std::exp(sol.rate1 * t) - std::exp(sol.rate2 * t));
    }
    const double r1k = std::pow(sol.rate1, derivative_order);
    const double r2k = std::pow(sol.rate2, derivative_order);
    return sol.c1 * r1k * std::exp(sol.rate1 * t) + sol.c2 * r2k * std::exp(sol.rate2 * t);
}

double max_second_derivative(const HMModalSolution& sol, double t0, double t1, int samples) {
    if (!(t0 >= 0.0) || !(t1 >= t0) || samples < 2) {
        throw Error(Errc::InvalidParams, "need 0 <= t0 <= t1 and at least two samples");
    }
    double best = 0.0;
    for (int i = 0; i < samples; ++i) {
        const double s = t0 + (t1 - t0) * static_cast<double>(i) / (samples - 1);
        best = std::max(best, std::abs(hm_modal_exact(sol, s, 2)));
    }
    return best;
}

double hm_error_bound(const ErrorBoundInputs& inp, double t) {
    if (!(t >= 0.0)) {
        throw Error(Errc::InvalidParams, "hm_error_bound requires t >= 0");
    }
    return inp.C * inp.eps * t * linalg::phi(-inp.omega * t) * inp.max_y2;
}

LocalErrorTerms local_error_model(double tau, double eps, double M3, double M4) {
    if (!(tau > 0.0) || !(eps > 0.0) || !(M3 >= 0.0) || !(M4 >= 0.0)) {
        throw Error(Errc::InvalidParams, "local_error_model needs tau, eps > 0 and M3, M4 >= 0");
    }
    const double tau4 = tau * tau * tau * tau;
    const double denom = tau + 2.0 * eps;
    return {M3 / 6.0 * 2.0 * tau4 / denom, M4 / 12.0 * 2.0 * tau4 * eps / denom};
}

CentralDifferences central_diff_truncation(double y_minus, double y_center, double y_plus,
                                           double tau) {
    if (!(tau > 0.0)) {
        throw Error(Errc::InvalidParams, "central differences need tau > 0");
    }
    return {(y_plus - y_minus) / (2.0 * tau), (y_plus - 2.0 * y_center + y_minus) / (tau * tau)};
}

Vector hm_system_exact(const linalg::SymmetricOperator& A, double eps, double t,
                       const Vector& y0) {
    if (!(eps > 0.0) || !(t >= 0.0)) {
        throw Error(Errc::InvalidParams, "hm_system_exact needs eps > 0 and t >= 0");
    }
    Vector modal = A.to_modal(y0);
    const Vector& lambdas = A.eigenvalues();
    for (Eigen::Index j = 0; j < modal.size(); ++j) {
        if (lambdas(j) <= 0.0) {
            continue;
        }
        const double D = 1.0 - 4.0 * lambdas(j) * eps;
        if (!(D > 0.0)) {
            std::ostringstream msg;
            msg << "mode " << j << " with lambda = " << lambdas(j) << " has D = " << D
                << " <= 0 for eps = " << eps;
            throw Error(Errc::NegativeDiscriminant, msg.str());
        }
        modal(j) *= hm_modal_exact(HMModalSolution::create(lambdas(j), eps), t);
    }
    return A.from_modal(modal);
}

}  // namespace hm::analytic
