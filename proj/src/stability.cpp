#include "hm/stability.hpp"

#include "hm/error.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace hm::stability {

using linalg::SymmetricOperator;
using scheme::HMParams;

namespace {

void validate_block_args(double mu, double eps_tilde) {
    if (!(eps_tilde > 0.0) || !(mu >= 0.0) || !std::isfinite(mu) || !std::isfinite(eps_tilde)) {
        std::ostringstream msg;
        msg << "block needs mu >= 0 and eps_tilde > 0, got mu = " << mu
            << ", eps_tilde = " << eps_tilde;
        throw Error(Errc::InvalidParams, msg.str());
    }
}

// mu^2 + 1 - 4 et mu, the radicand of the root formula without the
// (2 et - mu)^2 - 4 et^2 cancellation.
double radicand(double mu, double eps_tilde) {
    return mu * (mu - 4.0 * eps_tilde) + 1.0;
}

}  // namespace

AmplificationBlock build_block(double mu, double eps_tilde) {
    validate_block_args(mu, eps_tilde);
    const double denom = 1.0 + 2.0 * eps_tilde;
    AmplificationBlock block;
    block.mu = mu;
    block.eps_tilde = eps_tilde;
    block.entries << (4.0 * eps_tilde - 2.0 * mu) / denom, (1.0 - 2.0 * eps_tilde) / denom,
        1.0, 0.0;
    return block;
}

BlockEigen block_eigenvalues(double mu, double eps_tilde) {
    validate_block_args(mu, eps_tilde);
    const double a = 1.0 + 2.0 * eps_tilde;
    const double b = 2.0 * eps_tilde - mu;
    const double c = 2.0 * eps_tilde - 1.0;
    const double r = radicand(mu, eps_tilde);

    BlockEigen out;
    out.discriminant = r;
    out.separation = 2.0 * std::sqrt(std::abs(r)) / a;
    if (r < 0.0) {
        const double im = std::sqrt(-r) / a;
        out.xi1 = Complex(b / a, im);
        out.xi2 = Complex(b / a, -im);
        return out;
    }
    // Real roots: take the larger-magnitude one directly and recover the other
    // from xi1 * xi2 = c / a.
    const double s = std::sqrt(r);
    if (b >= 0.0) {
        const double big = b + s;
        out.xi1 = big / a;
        out.xi2 = big != 0.0 ? c / big : 0.0;
    } else {
        const double big = b - s;
        out.xi2 = big / a;
        out.xi1 = c / big;
    }
    return out;
}

double exact_separation(double mu, double eps_tilde) {
    validate_block_args(mu, eps_tilde);
    return 2.0 * std::sqrt(std::abs(radicand(mu, eps_tilde))) / (1.0 + 2.0 * eps_tilde);
}

double growth_indicator(double lambda, const HMParams& p) {
    if (!(lambda >= 0.0)) {
        throw Error(Errc::InvalidParams, "growth indicator needs lambda >= 0");
    }
    const double gap = std::abs(1.0 - 4.0 * p.eps() * lambda);
    if (gap < 1e-14) {
        std::ostringstream msg;
        msg << "4 eps lambda = 1 (lambda = " << lambda << ", eps = " << p.eps()
            << ") is the singular point of the indicator";
        throw Error(Errc::SingularIndicator, msg.str());
    }
    return (p.tau() + 2.0 * p.eps()) / (2.0 * p.tau() * std::sqrt(gap));
}

SamarskiiVerdict samarskii_check(const HMParams& p, double lambda_max) {
    if (!(lambda_max > 0.0) || !std::isfinite(lambda_max)) {
        throw Error(Errc::InvalidParams, "Samarskii check needs lambda_max > 0");
    }
    SamarskiiVerdict v;
    v.tau_bound = std::sqrt(4.0 * p.eps() / lambda_max);
    v.stable = p.tau() < v.tau_bound;
    v.margin = v.tau_bound - p.tau();
    return v;
}

Matrix build_amplification(const SymmetricOperator& A, const HMParams& p) {
    const Eigen::Index N = A.dim();
    const double et = p.eps_tilde();
    const double denom = 1.0 + 2.0 * et;
    Matrix S = Matrix::Zero(2 * N, 2 * N);
    S.topLeftCorner(N, N) = (-2.0 * p.tau() / denom) * A.entries();
    S.topLeftCorner(N, N).diagonal().array() += 4.0 * et / denom;
    S.topRightCorner(N, N).diagonal().setConstant((1.0 - 2.0 * et) / denom);
    S.bottomLeftCorner(N, N).diagonal().setOnes();
    return S;
}

std::vector<AmplificationBlock> modal_blocks(const SymmetricOperator& A, const HMParams& p) {
    std::vector<AmplificationBlock> blocks;
    blocks.reserve(static_cast<std::size_t>(A.dim()));
    for (Eigen::Index j = 0; j < A.dim(); ++j) {
        blocks.push_back(build_block(p.tau() * A.eigenvalues()(j), p.eps_tilde()));
    }
    return blocks;
}

double PowerNormCurve::max() const {
    return norms.empty() ? 0.0 : *std::max_element(norms.begin(), norms.end());
}

PowerNormCurve power_norm_curve(const std::vector<AmplificationBlock>& blocks,
                                std::int64_t n_max, double overflow_guard) {
    if (n_max < 1) {
        throw Error(Errc::InvalidParams, "power_norm_curve needs n_max >= 1");
    }
    if (n_max > kMaxPowers) {
        std::ostringstream msg;
        msg << "n_max = " << n_max << " exceeds " << kMaxPowers;
        throw Error(Errc::StepCountOverflow, msg.str());
    }
    if (blocks.empty()) {
        throw Error(Errc::InvalidParams, "power_norm_curve needs at least one block");
    }
    std::vector<Matrix2> powers(blocks.size(), Matrix2::Identity());
    PowerNormCurve curve;
    curve.norms.reserve(static_cast<std::size_t>(n_max));
    for (std::int64_t n = 1; n <= n_max; ++n) {
        double worst = 0.0;
        for (std::size_t j = 0; j < blocks.size(); ++j) {
            powers[j] = (blocks[j].entries * powers[j]).eval();
            worst = std::max(worst, linalg::two_norm(powers[j]));
        }
        curve.norms.push_back(worst);
        if (!(worst <= overflow_guard)) {
            curve.overflowed = true;
            break;
        }
    }
    return curve;
}

PowerNormCurve power_norm_curve(const SymmetricOperator& A, const HMParams& p,
                                std::int64_t n_max, double overflow_guard) {
    return power_norm_curve(modal_blocks(A, p), n_max, overflow_guard);
}

std::vector<double> full_power_norms(const Matrix& S, const std::vector<std::int64_t>& exponents) {
    if (S.rows() != S.cols()) {
        throw Error(Errc::DimensionMismatch, "amplification matrix must be square");
    }
    std::vector<double> out;
    out.reserve(exponents.size());
    Matrix power = Matrix::Identity(S.rows(), S.cols());
    std::int64_t reached = 0;
    for (std::int64_t n : exponents) {
        if (n < reached || n < 1) {
            throw Error(Errc::InvalidParams, "exponents must be positive and ascending");
        }
        for (; reached < n; ++reached) {
            power = (S * power).eval();
        }
        out.push_back(linalg::two_norm(power));
    }
    return out;
}

std::optional<MonotonicityWitness> monotonicity_witness(const HMParams& p, double mu) {
    const double et = p.eps_tilde();
    if (et <= 0.5) {
        return std::nullopt;
    }
    const AmplificationBlock block = build_block(mu, et);
    const double s11 = block.s11();
    const double s12 = block.s12();
    if (!(s12 < 0.0)) {
        return std::nullopt;
    }
    MonotonicityWitness w;
    w.mu = mu;
    w.y1 = 1.0;
    w.y0 = std::floor(std::max(s11, 0.0) / -s12) + 1.0;
    w.y2 = s11 * w.y1 + s12 * w.y0;
    while (!(w.y2 < 0.0)) {
        w.y0 += 1.0;
        w.y2 = s11 * w.y1 + s12 * w.y0;
    }
    return w;
}

PolicyBound epsilon_policy_bounds(const EpsilonPolicy& policy, double lambda_max) {
    if (!(lambda_max > 0.0) || !std::isfinite(lambda_max)) {
        throw Error(Errc::InvalidParams, "policy bounds need lambda_max > 0");
    }
    struct Visitor {
        double lambda_max;

        PolicyBound operator()(const ConstEps& pol) const {
            if (!(pol.eps > 0.0)) {
                throw Error(Errc::InvalidParams, "ConstEps needs eps > 0");
            }
            return {std::sqrt(4.0 * pol.eps / lambda_max),
                    "fixed eps: tau < sqrt(4 eps / lambda_max)"};
        }
        PolicyBound operator()(const LinearInTau& pol) const {
            if (!(pol.c_tilde > 0.0)) {
                throw Error(Errc::InvalidParams, "LinearInTau needs c_tilde > 0");
            }
            return {4.0 * pol.c_tilde / lambda_max,
                    "eps = c_tilde tau: tau < 4 c_tilde / lambda_max, an explicit-type "
                    "O(h^2) restriction"};
        }
        PolicyBound operator()(const LinearInH& pol) const {
            if (!(pol.K > 0.0) || !(pol.h > 0.0)) {
                throw Error(Errc::InvalidParams, "LinearInH needs K > 0 and h > 0");
            }
            return {std::sqrt(4.0 * pol.K * pol.h / lambda_max),
                    "eps = K h: tau < h sqrt(eps / K) = h^{3/2} when lambda_max = 4K/h^2"};
        }
    };
    return std::visit(Visitor{lambda_max}, policy);
}

StabilityReport stability_report(const SymmetricOperator& A, const HMParams& p,
                                 std::int64_t n_max) {
    StabilityReport report;
    report.lambda_max = A.lambda_max();
    report.n_max = n_max;
    if (report.lambda_max > 0.0) {
        const auto verdict = samarskii_check(p, report.lambda_max);
        report.tau_bound = verdict.tau_bound;
        report.stable = verdict.stable;
    } else {
        report.tau_bound = std::numeric_limits<double>::infinity();
        report.stable = true;
    }

    bool eigen_stable = true;
    report.per_mode.reserve(static_cast<std::size_t>(A.dim()));
    for (Eigen::Index j = 0; j < A.dim(); ++j) {
        ModeReport mode;
        mode.lambda = A.eigenvalues()(j);
        mode.mu = p.tau() * mode.lambda;
        const BlockEigen eig = block_eigenvalues(mode.mu, p.eps_tilde());
        mode.xi1 = eig.xi1;
        mode.xi2 = eig.xi2;
        mode.inverse_separation = eig.separation > 0.0
                                      ? 1.0 / eig.separation
                                      : std::numeric_limits<double>::infinity();
        if (std::abs(1.0 - 4.0 * p.eps() * mode.lambda) >= 1e-14) {
            mode.indicator = growth_indicator(mode.lambda, p);
        }
        if (mode.lambda > 0.0 && !(eig.spectral_radius() < 1.0)) {
            eigen_stable = false;
        }
        report.per_mode.push_back(mode);
    }

    const double boundary_band = 1e-9 * report.tau_bound;
    if (eigen_stable != report.stable &&
        std::abs(report.tau_bound - p.tau()) > boundary_band) {
        std::ostringstream msg;
        msg << "eigenvalue verdict (" << eigen_stable << ") disagrees with tau < tau_bound ("
            << report.stable << ") for tau = " << p.tau() << ", tau_bound = " << report.tau_bound;
        throw Error(Errc::NonFinite, msg.str());
    }

    if (n_max > 0) {
        report.max_power_norm = power_norm_curve(A, p, n_max).max();
    }
    return report;
}

}  // namespace hm::stability
