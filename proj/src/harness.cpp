#include "hm/harness.hpp"

#include "hm/analytic.hpp"
#include "hm/error.hpp"
#include "hm/problems.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

namespace hm::harness {

using linalg::SymmetricOperator;
using scheme::HMParams;

namespace {

[[noreturn]] void config_error(const std::string& what) {
    throw Error(Errc::ConfigError, what);
}

bool positive(double v) {
    return v > 0.0 && std::isfinite(v);
}

struct ProblemSetup {
    SymmetricOperator op;
    Vector y0;
};

ProblemSetup make_problem(const ExperimentConfig& cfg) {
    if (cfg.problem == ProblemKind::Heat1D) {
        auto heat = problems::build_heat1d(cfg.nx);
        Vector y0 = problems::heat1d_initial(heat);
        return {std::move(heat.op), std::move(y0)};
    }
    return {problems::scalar_problem(cfg.lambda), Vector::Ones(1)};
}

std::vector<double> halved_taus(const ExperimentConfig& cfg) {
    std::vector<double> taus;
    for (int k = 0; k <= cfg.halvings; ++k) {
        taus.push_back(std::ldexp(cfg.tau, -k));
    }
    return taus;
}

double relative_error(const Vector& reference, const Vector& approx) {
    const double ref = reference.norm();
    return ref > 0.0 ? (reference - approx).norm() / ref : (reference - approx).norm();
}

double worst_indicator(const SymmetricOperator& A, const HMParams& p) {
    double worst = 0.0;
    for (Eigen::Index j = 0; j < A.dim(); ++j) {
        const double lambda = A.eigenvalues()(j);
        if (std::abs(1.0 - 4.0 * p.eps() * lambda) < 1e-14) {
            continue;
        }
        worst = std::max(worst, stability::growth_indicator(lambda, p));
    }
    return worst;
}

PowersResult powers_for(const SymmetricOperator& A, const ExperimentConfig& cfg) {
    PowersResult result;
    for (double tau : halved_taus(cfg)) {
        const HMParams p(tau, cfg.eps);
        const std::int64_t n_max = scheme::step_count(cfg.T, tau);
        auto curve = stability::power_norm_curve(A, p, n_max, kOverflowGuard);
        const double max_norm =
            curve.overflowed ? std::numeric_limits<double>::infinity() : curve.max();
        result.summary.push_back({tau, max_norm, worst_indicator(A, p)});
        result.curves.push_back({tau, std::move(curve)});
    }
    return result;
}

ConvergenceTable convergence_for(const SymmetricOperator& A, const Vector& y0,
                                 const ExperimentConfig& cfg, ConvergenceMode mode) {
    if (cfg.halvings < 3) {
        config_error("convergence studies need --halvings >= 3 (at least four step sizes)");
    }
    ConvergenceTable table;
    std::vector<double> taus;
    std::vector<double> errors;
    for (double tau : halved_taus(cfg)) {
        const HMParams p(tau, cfg.eps);
        double error = 0.0;
        if (mode == ConvergenceMode::Local) {
            scheme::SchemeState seed;
            seed.n = 1;
            seed.t = tau;
            seed.y_prev = y0.cast<long double>();
            seed.y_curr = analytic::hm_system_exact(A, cfg.eps, tau, y0).cast<long double>();
            const auto next = scheme::hm_step(A, seed, p);
            const auto res = scheme::step_residual(A, Vector(), seed.y_prev, seed.y_curr,
                                                   next.y_curr, p);
            table.max_residual_ratio = std::max(table.max_residual_ratio, res.ratio());
            const Vector exact = analytic::hm_system_exact(A, cfg.eps, next.t, y0);
            error = relative_error(exact, next.y_curr.cast<double>());
        } else {
            const auto traj =
                scheme::integrate(A, {}, y0, p, cfg.T, scheme::Bootstrap::ExactHM);
            table.max_residual_ratio = std::max(table.max_residual_ratio, traj.max_residual_ratio);
            const auto& last = traj.final();
            const Vector exact = analytic::hm_system_exact(A, cfg.eps, last.t, y0);
            error = relative_error(exact, last.y_curr.cast<double>());
        }
        ConvergenceRow row{tau, error, std::nullopt};
        if (!errors.empty()) {
            row.observed_order = std::log(errors.back() / error) / std::log(2.0);
        }
        taus.push_back(tau);
        errors.push_back(error);
        table.rows.push_back(row);
    }
    table.fitted_order = fit_order(taus, errors);
    return table;
}

}  // namespace

// ---------------------------------------------------------------------------

void ExperimentConfig::validate() const {
    if (!positive(lambda)) config_error("--lambda must be positive and finite");
    if (!positive(eps)) config_error("--eps must be positive and finite");
    if (!positive(tau)) config_error("--tau must be positive and finite");
    if (!positive(T)) config_error("--T must be positive and finite");
    if (T < 2.0 * tau * (1.0 - 1e-12)) config_error("--T must be at least 2 * tau");
    if (nx < 2) config_error("--nx must be at least 2");
    if (n_max < 1 || n_max > stability::kMaxPowers) config_error("--nmax must be in [1, 1e7]");
    if (mu_points < 2) config_error("--mu-points must be at least 2");
    if (halvings < 0 || halvings > 30) config_error("--halvings must be in [0, 30]");
    const double lo = resolved_mu_min();
    const double hi = resolved_mu_max();
    if (!(lo >= 0.0) || !std::isfinite(lo)) config_error("--mu-min must be >= 0");
    if (!(hi > lo) || !std::isfinite(hi)) config_error("--mu-max must exceed --mu-min");
    if (T / std::ldexp(tau, -halvings) > static_cast<double>(scheme::kMaxSteps)) {
        config_error("T / tau at the finest step exceeds 1e9 steps");
    }
}

double ExperimentConfig::resolved_mu_min() const {
    return std::isnan(mu_min) ? 0.0 : mu_min;
}

double ExperimentConfig::resolved_mu_max() const {
    return std::isnan(mu_max) ? 4.0 * eps / tau : mu_max;
}

// ---------------------------------------------------------------------------

std::string format_number(double value) {
    if (std::isnan(value)) return "nan";
    if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof(buf), value, std::chars_format::scientific, 16);
    return std::string(buf, res.ptr);
}

std::string to_csv(const CsvTable& table) {
    std::string out;
    for (std::size_t i = 0; i < table.header.size(); ++i) {
        out += (i ? "," : "") + table.header[i];
    }
    out += '\n';
    for (const auto& row : table.rows) {
        for (std::size_t i = 0; i < row.size(); ++i) {
            if (i) out += ',';
            if (const auto* d = std::get_if<double>(&row[i])) {
                out += format_number(*d);
            } else if (const auto* n = std::get_if<std::int64_t>(&row[i])) {
                out += std::to_string(*n);
            }
        }
        out += '\n';
    }
    return out;
}

void write_csv(const CsvTable& table, const std::filesystem::path& path) {
    std::ofstream file(path, std::ios::binary);
    if (!file) {
        config_error("cannot open output file " + path.string());
    }
    file << to_csv(table);
}

// ---------------------------------------------------------------------------

CsvTable run_sweep_mu(const ExperimentConfig& cfg) {
    cfg.validate();
    const HMParams p(cfg.tau, cfg.eps);
    const double lo = cfg.resolved_mu_min();
    const double hi = cfg.resolved_mu_max();
    CsvTable table;
    table.header = {"mu", "S11", "S12", "Re_xi1", "Re_xi2", "Im_xi1", "exp_neg_mu",
                    "implicit_euler"};
    for (int i = 0; i < cfg.mu_points; ++i) {
        const double mu = lo + (hi - lo) * i / (cfg.mu_points - 1);
        const auto block = stability::build_block(mu, p.eps_tilde());
        const auto eig = stability::block_eigenvalues(mu, p.eps_tilde());
        table.rows.push_back({mu, block.s11(), block.s12(), eig.xi1.real(), eig.xi2.real(),
                              eig.xi1.imag(), stability::exact_stability(mu),
                              stability::implicit_euler_stability(mu)});
    }
    return table;
}

CsvTable HMErrorResult::table() const {
    CsvTable t;
    t.header = {"t", "measured_error", "bound", "eps_y2"};
    for (const auto& r : rows) {
        t.rows.push_back({r.t, r.measured_error, r.bound, r.eps_y2});
    }
    return t;
}

HMErrorResult run_hm_error(const ExperimentConfig& cfg) {
    cfg.validate();
    if (cfg.problem != ProblemKind::Scalar) {
        config_error("hm-error is defined for the scalar problem only");
    }
    const auto sol = analytic::HMModalSolution::create(cfg.lambda, cfg.eps);
    HMErrorResult result;
    for (int i = 0; i < kHMErrorPoints; ++i) {
        const double t = cfg.T * i / (kHMErrorPoints - 1);
        const double y_tilde = analytic::hm_modal_exact(sol, t);
        const double y2 = analytic::hm_modal_exact(sol, t, 2);
        const double max_y2 =
            t > 0.0 ? analytic::max_second_derivative(sol, 0.0, t) : std::abs(y2);
        analytic::ErrorBoundInputs inp{cfg.eps, cfg.lambda, 1.0, max_y2};
        result.rows.push_back({t, std::abs(std::exp(-cfg.lambda * t) - y_tilde),
                               analytic::hm_error_bound(inp, t), cfg.eps * std::abs(y2)});
    }
    return result;
}

CsvTable ConvergenceTable::table() const {
    CsvTable t;
    t.header = {"tau", "error", "observed_order"};
    for (const auto& r : rows) {
        Cell order = std::monostate{};
        if (r.observed_order) order = *r.observed_order;
        t.rows.push_back({r.tau, r.error, order});
    }
    return t;
}

ConvergenceTable run_convergence(const ExperimentConfig& cfg, ConvergenceMode mode) {
    cfg.validate();
    const auto setup = make_problem(cfg);
    return convergence_for(setup.op, setup.y0, cfg, mode);
}

CsvTable PowersResult::curves_table() const {
    CsvTable t;
    t.header = {"tau", "n", "t", "norm_Sn"};
    for (const auto& c : curves) {
        const auto& norms = c.curve.norms;
        for (std::size_t i = 0; i < norms.size(); ++i) {
            const auto n = static_cast<std::int64_t>(i + 1);
            const bool flagged = c.curve.overflowed && i + 1 == norms.size();
            t.rows.push_back({c.tau, n, static_cast<double>(n) * c.tau,
                              flagged ? std::numeric_limits<double>::infinity() : norms[i]});
        }
    }
    return t;
}

CsvTable PowersResult::summary_table() const {
    CsvTable t;
    t.header = {"tau", "max_norm", "indicator"};
    for (const auto& s : summary) {
        t.rows.push_back({s.tau, s.max_norm, s.indicator});
    }
    return t;
}

PowersResult run_powers(const ExperimentConfig& cfg) {
    cfg.validate();
    const auto setup = make_problem(cfg);
    return powers_for(setup.op, cfg);
}

CsvTable BlockPowersResult::table() const {
    CsvTable t;
    t.header = {"mu", "p", "norm_Sjp"};
    for (std::size_t i = 0; i < mu.size(); ++i) {
        const auto& curve = curves[i];
        for (std::size_t k = 0; k < curve.norms.size(); ++k) {
            const bool flagged = curve.overflowed && k + 1 == curve.norms.size();
            t.rows.push_back({mu[i], static_cast<std::int64_t>(k + 1),
                              flagged ? std::numeric_limits<double>::infinity()
                                      : curve.norms[k]});
        }
    }
    return t;
}

BlockPowersResult run_block_powers(const ExperimentConfig& cfg) {
    cfg.validate();
    BlockPowersResult result;
    result.eps_tilde = cfg.eps / cfg.tau;
    const double lo = cfg.resolved_mu_min();
    const double hi = cfg.resolved_mu_max();
    for (int i = 0; i < cfg.mu_points; ++i) {
        const double mu = lo + (hi - lo) * i / (cfg.mu_points - 1);
        result.mu.push_back(mu);
        result.curves.push_back(stability::power_norm_curve(
            {stability::build_block(mu, result.eps_tilde)}, cfg.n_max, kOverflowGuard));
    }
    return result;
}

Heat1DResult run_heat1d(const ExperimentConfig& cfg) {
    cfg.validate();
    auto heat = problems::build_heat1d(cfg.nx);
    const Vector y0 = problems::heat1d_initial(heat);
    Heat1DResult result;
    result.lambda_max = heat.op.lambda_max();
    result.h = heat.h;
    result.samarskii = stability::samarskii_check(HMParams(cfg.tau, cfg.eps), result.lambda_max);
    result.powers = powers_for(heat.op, cfg);
    result.convergence = convergence_for(heat.op, y0, cfg, ConvergenceMode::Global);
    return result;
}

double fit_order(std::span<const double> taus, std::span<const double> errors) {
    if (taus.size() != errors.size()) {
        throw Error(Errc::DimensionMismatch, "fit_order needs equally many taus and errors");
    }
    if (taus.size() < 3) {
        throw Error(Errc::InsufficientData, "fit_order needs at least three points");
    }
    double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
    for (std::size_t i = 0; i < taus.size(); ++i) {
        if (!(taus[i] > 0.0) || !(errors[i] > 0.0)) {
            throw Error(Errc::InvalidParams, "fit_order needs positive taus and errors");
        }
        const double x = std::log(taus[i]);
        const double y = std::log(errors[i]);
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
    }
    const double n = static_cast<double>(taus.size());
    const double denom = n * sxx - sx * sx;
    if (!(std::abs(denom) > 0.0)) {
        throw Error(Errc::InsufficientData, "fit_order needs at least two distinct taus");
    }
    return (n * sxy - sx * sy) / denom;
}

}  // namespace hm::harness
