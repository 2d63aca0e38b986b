// Acceptance suite: one PASS/FAIL line per criterion, exit status 1 if any fails.
// All tolerances are pinned here.

#include "hm/analytic.hpp"
#include "hm/error.hpp"
#include "hm/harness.hpp"
#include "hm/problems.hpp"
#include "hm/scheme.hpp"
#include "hm/stability.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

using namespace hm;
using scheme::HMParams;

namespace {

constexpr double kLambda = 1000.0;
constexpr double kEps = 2e-4;
constexpr double kTau = 3e-5;
constexpr double kT = 3e-3;

// Criterion 1
constexpr int kMuPoints = 2000;
constexpr double kBoundaryTol = 1e-10;
constexpr double kMaxSeconds1 = 1.0;
// Criterion 2
constexpr int kZeroModeTrials = 100;
constexpr double kZeroModeTol = 1e-12;
// Criterion 3
constexpr double kLocalOrderLo = 3.7;
constexpr double kLocalOrderHi = 4.3;
constexpr double kMaxSeconds3 = 1.0;
// Criterion 4
constexpr double kGlobalOrderMax = 2.7;
constexpr double kHeatOrderLo = 1.5;
constexpr double kHeatOrderHi = 2.6;
constexpr double kMaxSeconds4 = 30.0;
// Criterion 5
constexpr double kPowerRatioLo = 1.6;
constexpr double kPowerRatioHi = 2.5;
// Criterion 6
constexpr double kIndicatorRelTol = 0.10;
// Criterion 7
constexpr int kBlockNormOperators = 10;
constexpr int kBlockNormMaxDim = 40;
constexpr double kBlockNormRelTol = 1e-8;
// Criterion 8
constexpr int kDffStates = 100;
constexpr double kDffRelTol = 1e-13;
// Criterion 9
constexpr int kBoundPoints = 300;
constexpr double kSharpnessFactor = 3.0;
// Criterion 10
constexpr double kTauBoundExpected = 8.9443e-4;
constexpr double kTauBoundTol = 1e-8;
// Criterion 11
constexpr double kEpsTildeWitness = 20.0 / 3.0;
constexpr double kMuWitness = 0.03;
// Criterion 12
constexpr double kResidualRatioMax = 1.0;

struct Outcome {
    bool pass = false;
    std::string detail;
};

/// Worst residual ratio over every scheme step taken by the suite.
double g_worst_residual = 0.0;
std::int64_t g_steps_checked = 0;

void note_residual(double ratio, std::int64_t steps = 1) {
    g_worst_residual = std::max(g_worst_residual, ratio);
    g_steps_checked += steps;
}

std::string fmt(double v) {
    std::ostringstream os;
    os.precision(6);
    os << v;
    return os.str();
}

double seconds_since(std::chrono::steady_clock::time_point start) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

double rel_diff(double a, double b) {
    const double scale = std::max(std::abs(a), std::abs(b));
    return scale == 0.0 ? 0.0 : std::abs(a - b) / scale;
}

/// One checked scheme step; the residual feeds criterion 12.
scheme::SchemeState checked_step(const linalg::SymmetricOperator& A,
                                 const scheme::SchemeState& s, const HMParams& p) {
    auto next = scheme::hm_step(A, s, p);
    const auto r = scheme::step_residual(A, Vector(), s.y_prev, s.y_curr, next.y_curr, p);
    note_residual(r.ratio());
    return next;
}

Outcome criterion1() {
    const auto start = std::chrono::steady_clock::now();
    int mismatches = 0;
    int above_boundary_failures = 0;
    for (double et : {0.1, 0.5, 2.0 / 3.0, 1.0, 20.0 / 3.0, 50.0}) {
        for (int i = 1; i <= kMuPoints; ++i) {
            const double mu = 8.0 * et * i / kMuPoints;
            const auto e = stability::block_eigenvalues(mu, et);
            const bool eig_stable = std::abs(e.xi1) < 1.0 - kBoundaryTol &&
                                    std::abs(e.xi2) < 1.0 - kBoundaryTol;
            const bool cond_stable = mu < 4.0 * et - kBoundaryTol;
            mismatches += eig_stable != cond_stable;
            if (mu >= 4.0 * et && !(std::abs(e.xi2) >= 1.0 - kBoundaryTol)) {
                ++above_boundary_failures;
            }
        }
    }
    const double elapsed = seconds_since(start);
    return {mismatches == 0 && above_boundary_failures == 0 && elapsed < kMaxSeconds1,
            "mismatches " + std::to_string(mismatches) + ", |xi2|<1 above boundary " +
                std::to_string(above_boundary_failures) + ", " + fmt(elapsed) + " s"};
}

Outcome criterion2() {
    std::mt19937_64 rng(20240601);
    std::uniform_real_distribution<double> log_et(-3.0, 3.0);
    double worst = 0.0;
    for (int k = 0; k < kZeroModeTrials; ++k) {
        const double et = std::pow(10.0, log_et(rng));
        const auto e = stability::block_eigenvalues(0.0, et);
        const double expected2 = -(1.0 - 2.0 * et) / (1.0 + 2.0 * et);
        worst = std::max({worst, std::abs(e.xi1 - stability::Complex(1.0)),
                          std::abs(e.xi2 - stability::Complex(expected2))});
    }
    return {worst <= kZeroModeTol, "max deviation " + fmt(worst)};
}

Outcome criterion3() {
    harness::ExperimentConfig cfg;
    const auto start = std::chrono::steady_clock::now();
    const auto t = harness::run_convergence(cfg, harness::ConvergenceMode::Local);
    const double elapsed = seconds_since(start);
    note_residual(t.max_residual_ratio, static_cast<std::int64_t>(t.rows.size()));
    return {t.fitted_order >= kLocalOrderLo && t.fitted_order <= kLocalOrderHi &&
                elapsed < kMaxSeconds3,
            "fitted order " + fmt(t.fitted_order) + ", " + fmt(elapsed) + " s"};
}

Outcome criterion4() {
    const auto start = std::chrono::steady_clock::now();
    harness::ExperimentConfig cfg;
    const auto scalar = harness::run_convergence(cfg, harness::ConvergenceMode::Global);
    note_residual(scalar.max_residual_ratio);
    cfg.problem = harness::ProblemKind::Heat1D;
    const auto heat = harness::run_heat1d(cfg);
    note_residual(heat.convergence.max_residual_ratio);
    const double elapsed = seconds_since(start);
    const double scalar_finest = *scalar.rows.back().observed_order;
    const double heat_finest = *heat.convergence.rows.back().observed_order;
    std::string orders;
    for (const auto& r : scalar.rows) {
        if (r.observed_order) orders += fmt(*r.observed_order) + " ";
    }
    return {scalar_finest <= kGlobalOrderMax && heat_finest >= kHeatOrderLo &&
                heat_finest <= kHeatOrderHi && elapsed < kMaxSeconds4,
            "scalar orders " + orders + "| heat finest " + fmt(heat_finest) + ", " +
                fmt(elapsed) + " s"};
}

Outcome criterion5() {
    harness::ExperimentConfig cfg;
    const auto r = harness::run_powers(cfg);
    bool ok = true;
    std::string ratios;
    for (std::size_t i = 1; i < r.summary.size(); ++i) {
        const double ratio = r.summary[i].max_norm / r.summary[i - 1].max_norm;
        ok = ok && ratio >= kPowerRatioLo && ratio <= kPowerRatioHi;
        ratios += fmt(ratio) + " ";
    }
    return {ok && r.summary.size() == 4, "ratios " + ratios};
}

Outcome criterion6() {
    bool ok = true;
    std::string detail;
    for (double tau : {kTau, kTau / 2}) {
        const HMParams p(tau, kEps);
        const double indicator = stability::growth_indicator(kLambda, p);
        const double exact = 1.0 / stability::exact_separation(tau * kLambda, p.eps_tilde());
        ok = ok && std::abs(indicator / exact - 1.0) <= kIndicatorRelTol;
        detail += "tau " + fmt(tau) + ": " + fmt(indicator) + " vs " + fmt(exact) + "; ";
    }
    return {ok, detail};
}

Outcome criterion7() {
    std::mt19937_64 rng(7007);
    std::normal_distribution<double> gauss;
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    double worst = 0.0;
    for (int k = 0; k < kBlockNormOperators; ++k) {
        const int n = 1 + static_cast<int>(rng() % kBlockNormMaxDim);
        Matrix G(n, n);
        for (int i = 0; i < n; ++i) {
            for (int j = 0; j < n; ++j) G(i, j) = gauss(rng);
        }
        const Matrix Q = Eigen::HouseholderQR<Matrix>(G).householderQ();
        // eps_tilde in [0.5, 2], spectrum spread over mu in [0, 3 eps_tilde].
        const double et = 0.5 + 1.5 * unif(rng);
        const double tau = 1e-3;
        Vector d(n);
        for (int i = 0; i < n; ++i) d(i) = (k % 3 == 0 && i == 0) ? 0.0 : 3.0 * et * unif(rng) / tau;
        Matrix A = Q * d.asDiagonal() * Q.transpose();
        const linalg::SymmetricOperator op(0.5 * (A + A.transpose()));
        const auto p = HMParams::from_eps_tilde(tau, et);
        const auto blocks = stability::power_norm_curve(op, p, 100);
        const auto full = stability::full_power_norms(stability::build_amplification(op, p),
                                                      {1, 10, 100});
        worst = std::max({worst, rel_diff(full[0], blocks.norms[0]),
                          rel_diff(full[1], blocks.norms[9]),
                          rel_diff(full[2], blocks.norms[99])});
    }
    return {worst <= kBlockNormRelTol, "max relative difference " + fmt(worst)};
}

Outcome criterion8() {
    std::mt19937_64 rng(8008);
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    double worst_entry = 0.0;
    double worst_norm = 0.0;
    for (int nx : {10, 100}) {
        const auto heat = problems::build_heat1d(nx);
        // Dyadic tau: eps = tau^2/h^2 and eps/tau are exact, so entries can be compared.
        // tau = 3e-3: one rounding in eps, compared normwise.
        for (double tau : {std::ldexp(1.0, -9), 3e-3}) {
            const bool dyadic = tau == std::ldexp(1.0, -9);
            const HMParams p(tau, tau * tau / (heat.h * heat.h));
            for (int k = 0; k < kDffStates; ++k) {
                ExtVector a(nx), b(nx);
                for (int i = 0; i < nx; ++i) {
                    a(i) = unif(rng);
                    b(i) = unif(rng);
                }
                const auto hm = checked_step(heat.op, {1, tau, a, b}, p).y_curr;
                const auto dff = scheme::dufort_frankel_step(a, b, tau, heat.h);
                if (dyadic) {
                    for (int i = 0; i < nx; ++i) {
                        worst_entry = std::max(worst_entry, rel_diff(static_cast<double>(hm(i)),
                                                                     static_cast<double>(dff(i))));
                    }
                }
                worst_norm = std::max(worst_norm, static_cast<double>((hm - dff).norm() /
                                                                      dff.norm()));
            }
        }
    }
    return {worst_entry <= kDffRelTol && worst_norm <= kDffRelTol,
            "entrywise (dyadic tau) " + fmt(worst_entry) + ", normwise " + fmt(worst_norm)};
}

Outcome criterion9() {
    harness::ExperimentConfig cfg;
    const auto r = harness::run_hm_error(cfg);
    // Independent measured error from the closed-form constants.
    const double root = std::sqrt(1.0 - 4.0 * kLambda * kEps);
    const double r1 = (-1.0 + root) / (2.0 * kEps), r2 = (-1.0 - root) / (2.0 * kEps);
    const double c2 = (r1 + kLambda) / (r1 - r2), c1 = 1.0 - c2;
    bool dominated = r.rows.size() == static_cast<std::size_t>(kBoundPoints);
    double max_measured = 0.0, max_bound = 0.0, oracle_gap = 0.0;
    for (const auto& row : r.rows) {
        const double oracle = std::abs(std::exp(-kLambda * row.t) -
                                       (c1 * std::exp(r1 * row.t) + c2 * std::exp(r2 * row.t)));
        oracle_gap = std::max(oracle_gap, std::abs(oracle - row.measured_error));
        dominated = dominated && row.bound >= row.measured_error;
        max_measured = std::max(max_measured, row.measured_error);
        max_bound = std::max(max_bound, row.bound);
    }
    const double factor = max_bound / max_measured;
    return {dominated && factor <= kSharpnessFactor && oracle_gap < 1e-12,
            "bound >= measured at all points: " + std::string(dominated ? "yes" : "no") +
                ", max(bound)/max(measured) " + fmt(factor)};
}

Outcome criterion10() {
    const auto v = stability::samarskii_check(HMParams(kTau, kEps), kLambda);
    const double b = v.tau_bound;
    const bool at = stability::samarskii_check(HMParams(b, kEps), kLambda).stable;
    const bool below =
        stability::samarskii_check(HMParams(std::nextafter(b, 0.0), kEps), kLambda).stable;
    const bool above =
        stability::samarskii_check(HMParams(std::nextafter(b, 1.0), kEps), kLambda).stable;
    // Eigenvalue side: just below the bound every |xi| < 1, at the bound |xi2| = 1.
    const double below_tau = b * (1.0 - 1e-6);
    const auto e_below =
        stability::block_eigenvalues(below_tau * kLambda, kEps / below_tau);
    const auto e_at = stability::block_eigenvalues(b * kLambda, kEps / b);
    const bool eig_ok = e_below.spectral_radius() < 1.0 &&
                        std::abs(e_at.spectral_radius() - 1.0) < 1e-12;
    return {std::abs(b - kTauBoundExpected) <= kTauBoundTol && v.stable && !at && below &&
                !above && eig_ok,
            "tau_bound " + fmt(b) + ", verdict below/at/above: " + std::to_string(below) + "/" +
                std::to_string(at) + "/" + std::to_string(above)};
}

Outcome criterion11() {
    const auto p = HMParams::from_eps_tilde(kTau, kEpsTildeWitness);
    const auto w = stability::monotonicity_witness(p, kMuWitness);
    if (!w) return {false, "no witness"};
    // Replay with the scheme itself on the scalar operator lambda = mu/tau.
    const auto op = problems::scalar_problem(kMuWitness / kTau);
    scheme::SchemeState s{1, kTau, ExtVector::Constant(1, 3.0L), ExtVector::Constant(1, 1.0L)};
    const double y2 = static_cast<double>(checked_step(op, s, p).y_curr(0));
    return {w->y0 == 3.0 && w->y1 == 1.0 && w->y2 < 0.0 && y2 < 0.0,
            "(y0, y1) = (" + fmt(w->y0) + ", " + fmt(w->y1) + ") -> y2 = " + fmt(w->y2) +
                ", scheme step " + fmt(y2)};
}

Outcome criterion12() {
    // Additional random systems with a source term, on top of the steps taken above.
    std::mt19937_64 rng(1212);
    std::uniform_real_distribution<double> unif(-1.0, 1.0);
    for (int k = 0; k < 10; ++k) {
        const int n = 1 + static_cast<int>(rng() % 40);
        Matrix G(n, n);
        for (int i = 0; i < n; ++i) {
            for (int j = 0; j < n; ++j) G(i, j) = unif(rng);
        }
        const linalg::SymmetricOperator op(G * G.transpose() * 100.0);
        Vector g(n), y0(n);
        for (int i = 0; i < n; ++i) {
            g(i) = unif(rng);
            y0(i) = unif(rng);
        }
        const double lambda_max = op.lambda_max();
        const double eps = 1e-3;
        const double tau = 0.5 * std::sqrt(4.0 * eps / lambda_max);
        const scheme::Source f = [g](double t) -> Vector { return g * std::sin(3.0 * t); };
        const auto traj = scheme::integrate(op, f, y0, HMParams(tau, eps), 200 * tau);
        note_residual(traj.max_residual_ratio, traj.steps_checked);
    }
    return {g_worst_residual <= kResidualRatioMax,
            "worst ||r|| / tolerance " + fmt(g_worst_residual) + " over " +
                std::to_string(g_steps_checked) + "+ checked steps"};
}

}  // namespace

int main() {
    const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria = {
        {"C1  eigenvalue stability <=> mu < 4 eps_tilde", criterion1},
        {"C2  zero-mode eigenvalue pair", criterion2},
        {"C3  local order 4", criterion3},
        {"C4  global order degradation (scalar, heat1d)", criterion4},
        {"C5  max ||S^n|| grows like 1/tau", criterion5},
        {"C6  growth indicator accuracy", criterion6},
        {"C7  block-norm identity", criterion7},
        {"C8  Du Fort-Frankel equivalence", criterion8},
        {"C9  hyperbolic approximation error bound", criterion9},
        {"C10 Samarskii bound and verdict flip", criterion10},
        {"C11 non-monotonicity witness", criterion11},
        {"C12 scheme residual in every step", criterion12},
    };
    int failures = 0;
    for (const auto& [name, run] : criteria) {
        Outcome o;
        try {
            o = run();
        } catch (const std::exception& e) {
            o = {false, std::string("exception: ") + e.what()};
        }
        failures += !o.pass;
        std::printf("%s %s: %s\n", o.pass ? "PASS" : "FAIL", name, o.detail.c_str());
    }
    std::printf("%d/%zu criteria passed\n", static_cast<int>(criteria.size()) - failures,
                criteria.size());
    return failures == 0 ? 0 : 1;
}
