#pragma once

#include "hm/linalg.hpp"

#include <cstdint>
#include <functional>
#include <vector>

namespace hm::scheme {

/// Time step and hyperbolic parameter of the three-level scheme.
class HMParams {
public:
    /// Throws InvalidParams unless tau > 0 and eps > 0 (both finite).
    HMParams(double tau, double eps);

    /// eps = kappa * tau^2.
    static HMParams from_kappa(double tau, double kappa);
    /// eps = eps_tilde * tau.
    static HMParams from_eps_tilde(double tau, double eps_tilde);

    double tau() const noexcept { return tau_; }
    double eps() const noexcept { return eps_; }
    double eps_tilde() const noexcept { return eps_ / tau_; }
    double kappa() const noexcept { return eps_ / (tau_ * tau_); }

private:
    double tau_;
    double eps_;
};

/// Two consecutive time levels (y^{n-1}, y^n) at t = n tau.
struct SchemeState {
    std::int64_t n = 1;
    double t = 0.0;
    ExtVector y_prev;
    ExtVector y_curr;
};

/// Source term f(t); an empty function means f = 0.
using Source = std::function<Vector(double)>;

enum class Bootstrap { ExplicitEuler, ExactHM };

/// One step of
///
///     (y+ - y-)/(2 tau) + eps (y+ - 2y + y-)/tau^2 = -A y + f^n
///
/// in the solved form
///
///     y+ = [4 et y - 2 tau A y + (1 - 2 et) y- + 2 tau f^n] / (1 + 2 et),  et = eps/tau.
///
/// Throws DimensionMismatch or NonFinite.
SchemeState hm_step(const linalg::SymmetricOperator& A, const Vector& f_n,
                    const SchemeState& state, const HMParams& p);

/// Homogeneous step (f = 0).
SchemeState hm_step(const linalg::SymmetricOperator& A, const SchemeState& state,
                    const HMParams& p);

/// Residual of the three-level equation for (y_prev, y_curr, y_next) and the
/// acceptance threshold 1e-12 (||A|| ||y_curr|| + ||f_n|| + 1).
struct Residual {
    double norm = 0.0;
    double tolerance = 0.0;
    double ratio() const noexcept { return norm / tolerance; }
    bool ok() const noexcept { return norm <= tolerance; }
};

inline constexpr double kResidualRelTol = 1e-12;

Residual step_residual(const linalg::SymmetricOperator& A, const Vector& f_n,
                       const ExtVector& y_prev, const ExtVector& y_curr, const ExtVector& y_next,
                       const HMParams& p);

/// Builds the state at n = 1. ExplicitEuler takes y1 = y0 + tau(-A y0 + f0);
/// ExactHM takes y1 = y~(tau) from the closed-form hyperbolic approximation
/// (homogeneous problems only, f0 must vanish).
SchemeState bootstrap(const linalg::SymmetricOperator& A, const Vector& f0, const Vector& y0,
                      const HMParams& p, Bootstrap method);

struct Trajectory {
    std::vector<SchemeState> states;  ///< n = 1 .. n_final
    double max_residual_ratio = 0.0;  ///< worst ||r|| / tolerance over all steps
    std::int64_t steps_checked = 0;

    const SchemeState& final() const { return states.back(); }
    double final_time() const { return states.back().t; }
};

inline constexpr std::int64_t kMaxSteps = 1'000'000'000;

/// Number of levels reached for final time T: floor(T/tau + 1/2).
std::int64_t step_count(double T, double tau);

/// Runs the scheme up to n = floor(T/tau + 1/2) and checks the residual of
/// every step. Throws InvalidParams if T < 2 tau, StepCountOverflow past 1e9
/// steps and propagates hm_step errors.
Trajectory integrate(const linalg::SymmetricOperator& A, const Source& f, const Vector& y0,
                     const HMParams& p, double T, Bootstrap method = Bootstrap::ExplicitEuler);

/// Classic Du Fort-Frankel update on interior Dirichlet nodes (zero boundary):
///
///     (u_i^+ - u_i^-)/(2 tau) = (u_{i+1} - u_i^+ - u_i^- + u_{i-1}) / h^2.
ExtVector dufort_frankel_step(const ExtVector& prev, const ExtVector& curr, double tau, double h);

/// Explicit Euler reference integrator; returns y^0 .. y^n with
/// n = floor(T/tau + 1/2).
std::vector<Vector> explicit_euler_integrate(const linalg::SymmetricOperator& A, const Source& f,
                                             const Vector& y0, double tau, double T);

}  // namespace hm::scheme
