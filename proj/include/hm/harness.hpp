#pragma once

#include "hm/stability.hpp"

#include <cstdint>
#include <filesystem>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

namespace hm::harness {

enum class ProblemKind { Scalar, Heat1D };

/// Parameters shared by all experiment drivers. Defaults reproduce the
/// reference setup: lambda = 1e3, eps = 2e-4, tau = 3e-5, T = 3e-3.
struct ExperimentConfig {
    ProblemKind problem = ProblemKind::Scalar;
    double lambda = 1e3;
    double eps = 2e-4;
    double tau = 3e-5;
    double T = 3e-3;
    int nx = 100;
    std::int64_t n_max = 100;
    /// mu sweep range; NaN bounds default to [0, 4 eps/tau].
    double mu_min = std::numeric_limits<double>::quiet_NaN();
    double mu_max = std::numeric_limits<double>::quiet_NaN();
    int mu_points = 400;
    int halvings = 3;
    std::filesystem::path out;
    bool emit_svg = false;

    /// Throws Error(ConfigError) describing the first invalid field.
    void validate() const;

    double resolved_mu_min() const;
    double resolved_mu_max() const;
};

/// Power-norm values above this terminate a curve with a flagged row.
inline constexpr double kOverflowGuard = 1e12;

// ---------------------------------------------------------------------------
// CSV

using Cell = std::variant<std::monostate, std::int64_t, double>;

struct CsvTable {
    std::vector<std::string> header;
    std::vector<std::vector<Cell>> rows;
};

/// Scientific notation with 17 significant digits, lowercase 'e', independent
/// of the C/C++ locale. Infinities print as "inf", NaN as "nan".
std::string format_number(double value);
std::string to_csv(const CsvTable& table);
void write_csv(const CsvTable& table, const std::filesystem::path& path);

// ---------------------------------------------------------------------------
// Experiments

/// Block entries, eigenvalues and reference stability functions over mu.
/// Columns: mu, S11, S12, Re_xi1, Re_xi2, Im_xi1, exp_neg_mu, implicit_euler.
CsvTable run_sweep_mu(const ExperimentConfig& cfg);

struct HMErrorRow {
    double t = 0.0;
    double measured_error = 0.0;  ///< |exp(-lambda t) - y~(t)|
    double bound = 0.0;
    double eps_y2 = 0.0;          ///< eps |y~''(t)|
};

struct HMErrorResult {
    std::vector<HMErrorRow> rows;
    CsvTable table() const;
};

inline constexpr int kHMErrorPoints = 300;

/// Scalar problem only: error of the hyperbolic approximation against its
/// bound (omega = lambda, C = 1) on a 300-point grid over [0, T].
HMErrorResult run_hm_error(const ExperimentConfig& cfg);

enum class ConvergenceMode { Local, Global };

struct ConvergenceRow {
    double tau = 0.0;
    double error = 0.0;
    std::optional<double> observed_order;  ///< log2(e(2 tau) / e(tau)); absent on row 0
};

struct ConvergenceTable {
    std::vector<ConvergenceRow> rows;
    double fitted_order = 0.0;
    double max_residual_ratio = 0.0;  ///< worst scheme residual / tolerance seen
    CsvTable table() const;
};

/// Relative errors against the closed-form hyperbolic solution for
/// tau, tau/2, ..., tau/2^halvings.
///   Local  - one step from exact seeds y~(0), y~(tau); compared at 2 tau.
///   Global - integrate to T from an exact first step; compared at n tau.
ConvergenceTable run_convergence(const ExperimentConfig& cfg, ConvergenceMode mode);

struct PowersCurve {
    double tau = 0.0;
    stability::PowerNormCurve curve;
};

struct PowersSummary {
    double tau = 0.0;
    double max_norm = 0.0;
    double indicator = 0.0;  ///< worst growth indicator over the modes of A
};

struct PowersResult {
    std::vector<PowersCurve> curves;
    std::vector<PowersSummary> summary;
    /// Columns: tau, n, t, norm_Sn. A flagged (overflow) row carries norm_Sn = inf.
    CsvTable curves_table() const;
    /// Columns: tau, max_norm, indicator.
    CsvTable summary_table() const;
};

/// ||S^n|| for n = 1..floor(T/tau + 1/2) and each halved tau.
PowersResult run_powers(const ExperimentConfig& cfg);

struct BlockPowersResult {
    double eps_tilde = 0.0;
    std::vector<double> mu;
    std::vector<stability::PowerNormCurve> curves;  ///< one per mu, p = 1..n_max
    /// Columns: mu, p, norm_Sjp.
    CsvTable table() const;
};

/// ||S_j^p|| on the mu grid for p = 1..n_max at eps_tilde = eps/tau.
BlockPowersResult run_block_powers(const ExperimentConfig& cfg);

struct Heat1DResult {
    double lambda_max = 0.0;
    double h = 0.0;
    stability::SamarskiiVerdict samarskii;
    PowersResult powers;
    ConvergenceTable convergence;
};

/// Power curves and global convergence for the heat problem with nx nodes.
Heat1DResult run_heat1d(const ExperimentConfig& cfg);

/// Least-squares slope of log(error) against log(tau). Throws
/// InsufficientData with fewer than three points.
double fit_order(std::span<const double> taus, std::span<const double> errors);

// ---------------------------------------------------------------------------
// SVG

struct SvgSeries {
    std::string name;
    std::vector<double> x;
    std::vector<double> y;
};

struct SvgPlot {
    std::string title;
    std::string x_label;
    std::string y_label;
    bool log_x = false;
    bool log_y = false;
    std::vector<SvgSeries> series;
};

std::string render_svg(const SvgPlot& plot);
void write_svg(const SvgPlot& plot, const std::filesystem::path& path);

}  // namespace hm::harness
