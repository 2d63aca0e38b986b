#pragma once

#include "hm/linalg.hpp"

namespace hm::analytic {

/// Closed-form solution of the scalar hyperbolic approximation
///
///     eps y'' + y' + lambda y = 0,   y(0) = 1,  y'(0) = -lambda,
///
/// written as y(t) = c1 exp(r1 t) + c2 exp(r2 t) with real rates
/// r1,2 = (-1 +- sqrt(D)) / (2 eps), D = 1 - 4 lambda eps > 0.
///
/// Rates and coefficients are evaluated in cancellation-free form so the
/// slow mode stays accurate when lambda * eps is tiny.
struct HMModalSolution {
    double lambda = 0.0;
    double eps = 0.0;
    double discriminant = 0.0;
    double rate1 = 0.0;  ///< slow rate, r1 > r2
    double rate2 = 0.0;
    double c1 = 0.0;
    double c2 = 0.0;

    /// Throws InvalidParams for lambda <= 0 or eps <= 0 and
    /// NegativeDiscriminant when D <= 0.
    static HMModalSolution create(double lambda, double eps);
};

/// k-th time derivative (k = 0..4) of the modal solution at t >= 0.
double hm_modal_exact(const HMModalSolution& sol, double t, int derivative_order = 0);

/// max |y~''(s)| over s in [t0, t1], sampled on `samples` uniform points.
double max_second_derivative(const HMModalSolution& sol, double t0, double t1,
                             int samples = 1000);

struct ErrorBoundInputs {
    double eps = 0.0;
    double omega = 0.0;     ///< smallest eigenvalue of A
    double C = 1.0;         ///< exponential bound constant, 1 in the spectral norm
    double max_y2 = 0.0;    ///< max of ||y~''|| over the interval
};

/// Upper bound on ||y(t) - y~(t)||: C eps t phi(-omega t) max_y2.
double hm_error_bound(const ErrorBoundInputs& inp, double t);

struct LocalErrorTerms {
    double term1 = 0.0;  ///< (M3/6) * 2 tau^4 / (tau + 2 eps)
    double term2 = 0.0;  ///< (M4/12) * 2 tau^4 eps / (tau + 2 eps)
    double total() const noexcept { return term1 + term2; }
};

/// Truncation part of the one-step error, given bounds M3 >= |y~'''| and
/// M4 >= |y~''''| on [t_{n-1}, t_{n+1}].
LocalErrorTerms local_error_model(double tau, double eps, double M3, double M4);

struct CentralDifferences {
    double first_diff = 0.0;   ///< (y(t+tau) - y(t-tau)) / (2 tau)
    double second_diff = 0.0;  ///< (y(t+tau) - 2 y(t) + y(t-tau)) / tau^2
};

CentralDifferences central_diff_truncation(double y_minus, double y_center, double y_plus,
                                           double tau);

/// Solution of eps y'' + y' + A y = 0 with y(0) = y0, y'(0) = -A y0, assembled
/// mode by mode. Zero modes stay constant. Throws NegativeDiscriminant naming
/// the first eigenvalue with 1 - 4 lambda eps <= 0.
Vector hm_system_exact(const linalg::SymmetricOperator& A, double eps, double t,
                       const Vector& y0);

}  // namespace hm::analytic
