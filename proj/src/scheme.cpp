#include "hm/scheme.hpp"

#include "hm/analytic.hpp"
#include "hm/error.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace hm::scheme {

using linalg::SymmetricOperator;

HMParams::HMParams(double tau, double eps) : tau_(tau), eps_(eps) {
    if (!(tau > 0.0) || !(eps > 0.0) || !std::isfinite(tau) || !std::isfinite(eps)) {
        std::ostringstream msg;
        msg << "need tau > 0 and eps > 0, got tau = " << tau << ", eps = " << eps;
        throw Error(Errc::InvalidParams, msg.str());
    }
}

HMParams HMParams::from_kappa(double tau, double kappa) {
    return HMParams(tau, kappa * tau * tau);
}

HMParams HMParams::from_eps_tilde(double tau, double eps_tilde) {
    return HMParams(tau, eps_tilde * tau);
}

namespace {

struct StepOutput {
    ExtVector y_next;
    Residual residual;
};

void check_dims(const SymmetricOperator& A, const ExtVector& y_prev, const ExtVector& y_curr,
                const Vector& f_n) {
    const auto N = A.dim();
    if (y_prev.size() != N || y_curr.size() != N || (f_n.size() != 0 && f_n.size() != N)) {
        std::ostringstream msg;
        msg << "operator dimension " << N << " but y_prev/y_curr/f have lengths "
            << y_prev.size() << "/" << y_curr.size() << "/" << f_n.size();
        throw Error(Errc::DimensionMismatch, msg.str());
    }
}

Residual residual_from(const SymmetricOperator& A, const ExtVector& Ay, const Vector& f_n,
                       const ExtVector& y_prev, const ExtVector& y_curr, const ExtVector& y_next,
                       const HMParams& p) {
    const long double tau = p.tau();
    const long double eps = p.eps();
    ExtVector r = (y_next - y_prev) / (2.0L * tau) +
                  (eps / (tau * tau)) * (y_next - 2.0L * y_curr + y_prev) + Ay;
    double f_norm = 0.0;
    if (f_n.size() != 0) {
        r -= f_n.cast<long double>();
        f_norm = f_n.norm();
    }
    Residual res;
    res.norm = static_cast<double>(r.norm());
    res.tolerance =
        kResidualRelTol * (A.norm() * static_cast<double>(y_curr.norm()) + f_norm + 1.0);
    return res;
}

// f_n of length zero stands for f = 0.
StepOutput advance(const SymmetricOperator& A, const Vector& f_n, const ExtVector& y_prev,
                   const ExtVector& y_curr, const HMParams& p) {
    check_dims(A, y_prev, y_curr, f_n);
    const long double tau = p.tau();
    const long double et = static_cast<long double>(p.eps()) / tau;
    const long double denom = 1.0L + 2.0L * et;

    const ExtVector Ay = A.apply(y_curr);
    ExtVector rhs = (4.0L * et) * y_curr - (2.0L * tau) * Ay + (1.0L - 2.0L * et) * y_prev;
    if (f_n.size() != 0) {
        rhs += (2.0L * tau) * f_n.cast<long double>();
    }
    StepOutput out;
    out.y_next = rhs / denom;
    if (!out.y_next.allFinite()) {
        throw Error(Errc::NonFinite, "scheme update produced NaN or Inf");
    }
    out.residual = residual_from(A, Ay, f_n, y_prev, y_curr, out.y_next, p);
    return out;
}

SchemeState next_state(const SchemeState& s, ExtVector y_next, const HMParams& p) {
    SchemeState out;
    out.n = s.n + 1;
    out.t = static_cast<double>(out.n) * p.tau();
    out.y_prev = s.y_curr;
    out.y_curr = std::move(y_next);
    return out;
}

}  // namespace

SchemeState hm_step(const SymmetricOperator& A, const Vector& f_n, const SchemeState& state,
                    const HMParams& p) {
    if (f_n.size() != A.dim()) {
        throw Error(Errc::DimensionMismatch, "source vector length does not match operator");
    }
    auto out = advance(A, f_n, state.y_prev, state.y_curr, p);
    return next_state(state, std::move(out.y_next), p);
}

SchemeState hm_step(const SymmetricOperator& A, const SchemeState& state, const HMParams& p) {
    auto out = advance(A, Vector(), state.y_prev, state.y_curr, p);
    return next_state(state, std::move(out.y_next), p);
}

Residual step_residual(const SymmetricOperator& A, const Vector& f_n, const ExtVector& y_prev,
                       const ExtVector& y_curr, const ExtVector& y_next, const HMParams& p) {
    check_dims(A, y_prev, y_curr, f_n);
    if (y_next.size() != A.dim()) {
        throw Error(Errc::DimensionMismatch, "y_next length does not match operator");
    }
    return residual_from(A, A.apply(y_curr), f_n, y_prev, y_curr, y_next, p);
}

SchemeState bootstrap(const SymmetricOperator& A, const Vector& f0, const Vector& y0,
                      const HMParams& p, Bootstrap method) {
    if (y0.size() != A.dim() || (f0.size() != 0 && f0.size() != A.dim())) {
        throw Error(Errc::DimensionMismatch, "initial vector length does not match operator");
    }
    SchemeState s;
    s.n = 1;
    s.t = p.tau();
    s.y_prev = y0.cast<long double>();
    switch (method) {
        case Bootstrap::ExplicitEuler: {
            ExtVector rhs = -A.apply(s.y_prev);
            if (f0.size() != 0) {
                rhs += f0.cast<long double>();
            }
            s.y_curr = s.y_prev + static_cast<long double>(p.tau()) * rhs;
            break;
        }
        case Bootstrap::ExactHM: {
            if (f0.size() != 0 && f0.cwiseAbs().maxCoeff() != 0.0) {
                throw Error(Errc::InvalidParams,
                            "ExactHM bootstrap is only defined for homogeneous problems");
            }
            s.y_curr = analytic::hm_system_exact(A, p.eps(), p.tau(), y0).cast<long double>();
            break;
        }
    }
    if (!s.y_curr.allFinite()) {
        throw Error(Errc::NonFinite, "bootstrap produced NaN or Inf");
    }
    return s;
}

std::int64_t step_count(double T, double tau) {
    const double steps = std::floor(T / tau + 0.5);
    if (!(steps <= static_cast<double>(kMaxSteps))) {
        std::ostringstream msg;
        msg << "T/tau = " << T / tau << " exceeds the limit of " << kMaxSteps << " steps";
        throw Error(Errc::StepCountOverflow, msg.str());
    }
    return static_cast<std::int64_t>(steps);
}

Trajectory integrate(const SymmetricOperator& A, const Source& f, const Vector& y0,
                     const HMParams& p, double T, Bootstrap method) {
    if (!std::isfinite(T) || T < 2.0 * p.tau() * (1.0 - 1e-12)) {
        std::ostringstream msg;
        msg << "final time T = " << T << " must be at least 2 tau = " << 2.0 * p.tau();
        throw Error(Errc::InvalidParams, msg.str());
    }
    const std::int64_t n_final = step_count(T, p.tau());

    auto source = [&](std::int64_t n) -> Vector {
        return f ? f(static_cast<double>(n) * p.tau()) : Vector();
    };

    Trajectory traj;
    traj.states.reserve(static_cast<std::size_t>(n_final));
    traj.states.push_back(bootstrap(A, source(0), y0, p, method));
    for (std::int64_t n = 1; n < n_final; ++n) {
        const SchemeState& cur = traj.states.back();
        const Vector f_n = source(n);
        if (f_n.size() != 0 && f_n.size() != A.dim()) {
            throw Error(Errc::DimensionMismatch, "source callback returned wrong length");
        }
        auto out = advance(A, f_n, cur.y_prev, cur.y_curr, p);
        traj.max_residual_ratio = std::max(traj.max_residual_ratio, out.residual.ratio());
        ++traj.steps_checked;
        traj.states.push_back(next_state(cur, std::move(out.y_next), p));
    }
    return traj;
}

ExtVector dufort_frankel_step(const ExtVector& prev, const ExtVector& curr, double tau, double h) {
    if (prev.size() != curr.size()) {
        throw Error(Errc::DimensionMismatch, "Du Fort-Frankel levels differ in length");
    }
    if (!(tau > 0.0) || !(h > 0.0)) {
        throw Error(Errc::InvalidParams, "Du Fort-Frankel step needs tau > 0 and h > 0");
    }
    // Solving for u^+:  u^+ (1 + 2r) = (1 - 2r) u^- + 2r (u_{i+1} + u_{i-1}),  r = tau/h^2.
    // 1/h^2 is rounded to double exactly as the three-point stencil stores it.
    const double inv_h2 = 1.0 / (h * h);
    const long double r = static_cast<long double>(tau) * inv_h2;
    const Eigen::Index N = curr.size();
    ExtVector next(N);
    for (Eigen::Index i = 0; i < N; ++i) {
        const long double left = i > 0 ? curr(i - 1) : 0.0L;
        const long double right = i + 1 < N ? curr(i + 1) : 0.0L;
        next(i) = ((1.0L - 2.0L * r) * prev(i) + 2.0L * r * (left + right)) / (1.0L + 2.0L * r);
    }
    return next;
}

std::vector<Vector> explicit_euler_integrate(const SymmetricOperator& A, const Source& f,
                                             const Vector& y0, double tau, double T) {
    if (!(tau > 0.0) || !(T >= 0.0)) {
        throw Error(Errc::InvalidParams, "explicit Euler needs tau > 0 and T >= 0");
    }
    if (y0.size() != A.dim()) {
        throw Error(Errc::DimensionMismatch, "initial vector length does not match operator");
    }
    const std::int64_t n_final = step_count(T, tau);
    std::vector<Vector> out;
    out.reserve(static_cast<std::size_t>(n_final) + 1);
    out.push_back(y0);
    for (std::int64_t n = 0; n < n_final; ++n) {
        Vector rhs = -A.apply(out.back());
        if (f) {
            rhs += f(static_cast<double>(n) * tau);
        }
        Vector next = out.back() + tau * rhs;
        if (!next.allFinite()) {
            throw Error(Errc::NonFinite, "explicit Euler produced NaN or Inf");
        }
        out.push_back(std::move(next));
    }
    return out;
}

}  // namespace hm::scheme
