// Command-line driver for the hyperbolic-model scheme experiments.
//
// Exit codes: 0 success, 2 invalid configuration, 3 numerical failure.

#include "hm/error.hpp"
#include "hm/harness.hpp"
#include "hm/problems.hpp"
#include "hm/stability.hpp"

#include <CLI11.hpp>

#include <cmath>
#include <filesystem>
#include <iostream>
#include <map>
#include <numbers>
#include <string>

namespace {

using namespace hm;
using namespace hm::harness;

constexpr int kExitConfig = 2;
constexpr int kExitNumeric = 3;

struct Options {
    ExperimentConfig cfg;
    std::string problem = "scalar";
    std::string mode = "global";
    double c_tilde = 1.0;
    double K = 1.0;
    double h = std::numeric_limits<double>::quiet_NaN();
};

void add_common(CLI::App* sub, Options& o, bool with_problem) {
    auto& c = o.cfg;
    sub->add_option("--lambda", c.lambda, "scalar eigenvalue / lambda_max")->capture_default_str();
    sub->add_option("--eps", c.eps, "hyperbolic parameter eps")->capture_default_str();
    sub->add_option("--tau", c.tau, "time step (coarsest, for halving studies)")
        ->capture_default_str();
    sub->add_option("--T", c.T, "final time")->capture_default_str();
    sub->add_option("--nx", c.nx, "interior nodes of the heat problem")->capture_default_str();
    sub->add_option("--nmax", c.n_max, "largest matrix power")->capture_default_str();
    sub->add_option("--mu-min", c.mu_min, "lower end of the mu sweep (default 0)");
    sub->add_option("--mu-max", c.mu_max, "upper end of the mu sweep (default 4 eps/tau)");
    sub->add_option("--mu-points", c.mu_points, "points in the mu sweep")->capture_default_str();
    sub->add_option("--halvings", c.halvings, "number of tau halvings")->capture_default_str();
    sub->add_option("--out", c.out, "output CSV path (stdout when omitted)");
    sub->add_flag("--svg", c.emit_svg, "also write an SVG plot next to the CSV");
    if (with_problem) {
        sub->add_option("--problem", o.problem, "scalar | heat1d")
            ->check(CLI::IsMember({"scalar", "heat1d"}))
            ->capture_default_str();
    }
}

std::filesystem::path sibling(const std::filesystem::path& out, const std::string& suffix,
                              const std::string& ext = ".csv") {
    auto p = out;
    p.replace_filename(out.stem().string() + suffix + ext);
    return p;
}

void emit(const CsvTable& table, const std::filesystem::path& path, const char* label = nullptr) {
    if (path.empty()) {
        if (label != nullptr) {
            std::cout << "# " << label << '\n';
        }
        std::cout << to_csv(table);
    } else {
        write_csv(table, path);
        std::cerr << "wrote " << path.string() << '\n';
    }
}

void emit_svg(const Options& o, const SvgPlot& plot, const std::string& suffix = "") {
    if (o.cfg.emit_svg) {
        const auto path = sibling(o.cfg.out, suffix, ".svg");
        write_svg(plot, path);
        std::cerr << "wrote " << path.string() << '\n';
    }
}

void prepare(Options& o) {
    o.cfg.problem = o.problem == "heat1d" ? ProblemKind::Heat1D : ProblemKind::Scalar;
    if (o.cfg.emit_svg && o.cfg.out.empty()) {
        throw Error(Errc::ConfigError, "--svg requires --out");
    }
    o.cfg.validate();
}

SvgPlot powers_plot(const PowersResult& r, const std::string& title) {
    SvgPlot plot{title, "t = n tau", "||S^n||", false, false, {}};
    for (const auto& c : r.curves) {
        SvgSeries s{"tau=" + format_number(c.tau).substr(0, 7), {}, {}};
        for (std::size_t i = 0; i < c.curve.norms.size(); ++i) {
            s.x.push_back(static_cast<double>(i + 1) * c.tau);
            s.y.push_back(c.curve.norms[i]);
        }
        plot.series.push_back(std::move(s));
    }
    return plot;
}

SvgPlot convergence_plot(const ConvergenceTable& t, const std::string& title) {
    SvgPlot plot{title, "tau", "relative error", true, true, {}};
    SvgSeries s{"error", {}, {}};
    for (const auto& row : t.rows) {
        s.x.push_back(row.tau);
        s.y.push_back(row.error);
    }
    plot.series.push_back(std::move(s));
    return plot;
}

void cmd_sweep_mu(Options& o) {
    prepare(o);
    const auto table = run_sweep_mu(o.cfg);
    emit(table, o.cfg.out);
    SvgPlot plot{"block entries and eigenvalues", "mu", "value", false, false, {}};
    const char* names[] = {"S11", "S12", "Re xi1", "Re xi2", "Im xi1", "exp(-mu)", "1/(mu+1)"};
    for (std::size_t col = 1; col < table.header.size(); ++col) {
        SvgSeries s{names[col - 1], {}, {}};
        for (const auto& row : table.rows) {
            s.x.push_back(std::get<double>(row[0]));
            s.y.push_back(std::get<double>(row[col]));
        }
        plot.series.push_back(std::move(s));
    }
    emit_svg(o, plot);
}

void cmd_hm_error(Options& o) {
    prepare(o);
    const auto result = run_hm_error(o.cfg);
    emit(result.table(), o.cfg.out);
    SvgPlot plot{"error of the hyperbolic approximation", "t", "", false, false, {}};
    SvgSeries measured{"measured", {}, {}}, bound{"bound", {}, {}}, y2{"eps*|y''|", {}, {}};
    for (const auto& r : result.rows) {
        measured.x.push_back(r.t);
        measured.y.push_back(r.measured_error);
        bound.x.push_back(r.t);
        bound.y.push_back(r.bound);
        y2.x.push_back(r.t);
        y2.y.push_back(r.eps_y2);
    }
    plot.series = {measured, bound};
    emit_svg(o, plot);
    emit_svg(o, SvgPlot{"eps y''(t)", "t", "eps |y''|", false, false, {y2}}, "_eps_y2");
}

void cmd_converge(Options& o) {
    if (o.mode != "local" && o.mode != "global") {
        throw Error(Errc::ConfigError, "--mode must be local or global");
    }
    prepare(o);
    const auto mode = o.mode == "local" ? ConvergenceMode::Local : ConvergenceMode::Global;
    const auto table = run_convergence(o.cfg, mode);
    emit(table.table(), o.cfg.out);
    std::cerr << "fitted order " << format_number(table.fitted_order) << '\n';
    emit_svg(o, convergence_plot(table, o.mode + " error"));
}

void cmd_powers(Options& o) {
    prepare(o);
    const auto result = run_powers(o.cfg);
    emit(result.curves_table(), o.cfg.out, "powers");
    emit(result.summary_table(), o.cfg.out.empty() ? o.cfg.out : sibling(o.cfg.out, "_summary"),
         "summary");
    emit_svg(o, powers_plot(result, "||S^n|| versus time"));
}

void cmd_block_powers(Options& o) {
    prepare(o);
    const auto result = run_block_powers(o.cfg);
    emit(result.table(), o.cfg.out);
    SvgPlot plot{"block powers versus mu", "mu", "||S_j^p||", false, true, {}};
    std::int64_t p = 1;
    for (int k = 0; p <= o.cfg.n_max && k < 8; ++k, p *= 4) {
        SvgSeries s{"p=" + std::to_string(p), {}, {}};
        for (std::size_t i = 0; i < result.mu.size(); ++i) {
            const auto& norms = result.curves[i].norms;
            if (static_cast<std::size_t>(p) <= norms.size()) {
                s.x.push_back(result.mu[i]);
                s.y.push_back(norms[static_cast<std::size_t>(p - 1)]);
            }
        }
        plot.series.push_back(std::move(s));
    }
    emit_svg(o, plot);
}

void cmd_heat1d(Options& o) {
    o.problem = "heat1d";
    prepare(o);
    const auto result = run_heat1d(o.cfg);
    std::cerr << "lambda_max " << format_number(result.lambda_max) << ", h "
              << format_number(result.h) << ", tau_bound "
              << format_number(result.samarskii.tau_bound)
              << (result.samarskii.stable ? " (stable)" : " (unstable)") << '\n';
    const bool to_stdout = o.cfg.out.empty();
    emit(result.powers.curves_table(), o.cfg.out, "powers");
    emit(result.powers.summary_table(), to_stdout ? o.cfg.out : sibling(o.cfg.out, "_summary"),
         "summary");
    emit(result.convergence.table(),
         to_stdout ? o.cfg.out : sibling(o.cfg.out, "_convergence"), "convergence");
    emit_svg(o, powers_plot(result.powers, "heat equation: ||S^n|| versus time"));
    emit_svg(o, convergence_plot(result.convergence, "heat equation: global error"),
             "_convergence");
}

void cmd_stability_report(Options& o) {
    prepare(o);
    const auto op = o.cfg.problem == ProblemKind::Heat1D ? problems::build_heat1d(o.cfg.nx).op
                                                         : problems::scalar_problem(o.cfg.lambda);
    const scheme::HMParams p(o.cfg.tau, o.cfg.eps);
    const auto report = stability::stability_report(op, p, o.cfg.n_max);
    std::cerr << "lambda_max " << format_number(report.lambda_max) << ", tau_bound "
              << format_number(report.tau_bound) << ", stable " << (report.stable ? 1 : 0)
              << ", max ||S^n|| (n <= " << report.n_max << ") "
              << format_number(report.max_power_norm) << '\n';
    CsvTable table;
    table.header = {"lambda", "mu", "xi1_re", "xi1_im", "xi2_re", "xi2_im", "inv_separation",
                    "indicator"};
    for (const auto& m : report.per_mode) {
        Cell indicator = std::monostate{};
        if (m.indicator) indicator = *m.indicator;
        table.rows.push_back({m.lambda, m.mu, m.xi1.real(), m.xi1.imag(), m.xi2.real(),
                              m.xi2.imag(), m.inverse_separation, indicator});
    }
    emit(table, o.cfg.out);
}

void cmd_policy_bounds(Options& o) {
    prepare(o);
    const double h = std::isnan(o.h) ? 2.0 * std::numbers::pi / (o.cfg.nx + 1) : o.h;
    const double lambda_max = o.cfg.lambda;
    const std::pair<const char*, stability::EpsilonPolicy> policies[] = {
        {"const_eps", stability::ConstEps{o.cfg.eps}},
        {"linear_in_tau", stability::LinearInTau{o.c_tilde}},
        {"linear_in_h", stability::LinearInH{o.K, h}},
    };
    std::cout << "policy,max_tau,commentary\n";
    for (const auto& [name, policy] : policies) {
        const auto bound = stability::epsilon_policy_bounds(policy, lambda_max);
        std::cout << name << ',' << format_number(bound.max_tau) << ",\"" << bound.commentary
                  << "\"\n";
    }
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Hyperbolic-model explicit scheme: stability and accuracy experiments"};
    app.require_subcommand(1);

    std::map<std::string, Options> opts;
    std::map<std::string, void (*)(Options&)> handlers = {
        {"sweep-mu", cmd_sweep_mu},         {"hm-error", cmd_hm_error},
        {"converge", cmd_converge},         {"powers", cmd_powers},
        {"block-powers", cmd_block_powers}, {"heat1d", cmd_heat1d},
        {"stability-report", cmd_stability_report},
        {"policy-bounds", cmd_policy_bounds},
    };
    const std::map<std::string, std::string> help = {
        {"sweep-mu", "block entries and eigenvalues over a mu range"},
        {"hm-error", "error of the hyperbolic approximation and its bound"},
        {"converge", "local or global convergence study over halved tau"},
        {"powers", "||S^n|| curves for halved tau plus max-norm summary"},
        {"block-powers", "||S_j^p|| over a mu grid and powers p"},
        {"heat1d", "power curves and global convergence for the heat problem"},
        {"stability-report", "per-mode eigenvalues, indicators and Samarskii bound"},
        {"policy-bounds", "largest stable tau under the three eps policies"},
    };

    std::map<std::string, CLI::App*> subs;
    for (const auto& [name, text] : help) {
        auto& o = opts[name];
        auto* sub = app.add_subcommand(name, text);
        const bool with_problem =
            name == "converge" || name == "powers" || name == "stability-report";
        add_common(sub, o, with_problem);
        if (name == "converge") {
            sub->add_option("--mode", o.mode, "local | global")
                ->check(CLI::IsMember({"local", "global"}))
                ->capture_default_str();
        }
        if (name == "policy-bounds") {
            sub->add_option("--c-tilde", o.c_tilde, "eps = c_tilde * tau")->capture_default_str();
            sub->add_option("--K", o.K, "eps = K * h")->capture_default_str();
            sub->add_option("--spacing", o.h, "grid spacing (default 2 pi / (nx + 1))");
        }
        subs[name] = sub;
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : kExitConfig;
    }

    try {
        for (const auto& [name, sub] : subs) {
            if (sub->parsed()) {
                handlers.at(name)(opts[name]);
            }
        }
    } catch (const hm::Error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return e.is_config_error() ? kExitConfig : kExitNumeric;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitNumeric;
    }
    return 0;
}
