// firmscale: heterogeneous-firm general equilibrium with fixed costs,
// variable returns to scale and Pareto technology. Subcommands cover
// validation, steady states, parameter sweeps, transition paths, firm
// panels, cost curves, calibration and the year-by-year scenario runner.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <random>
#include <sstream>
#include <thread>

#include <CLI11.hpp>

#include "firmscale/calibration.hpp"
#include "firmscale/firms.hpp"
#include "firmscale/numeric.hpp"
#include "firmscale/pareto.hpp"
#include "firmscale/scenario.hpp"
#include "firmscale/statics.hpp"
#include "firmscale/steady_state.hpp"
#include "firmscale/transition.hpp"

namespace {

using namespace firmscale;

// exit codes: 0 ok, 2 validation failure, 3 solver failure, 4 I/O or parse
// error, 64 usage error
constexpr int kOk = 0;
constexpr int kValidationFailure = 2;
constexpr int kSolverFailure = 3;
constexpr int kIoFailure = 4;
constexpr int kUsage = 64;

struct CommonOpts {
    std::string config;
    std::vector<std::string> overrides;
    std::string out = "-";
    int jobs = static_cast<int>(std::thread::hardware_concurrency());
};

ModelParams load_params(const CommonOpts& c) {
    ModelParams p = params_from_config(c.config);
    for (const auto& ov : c.overrides) apply_override(p, ov);
    return p;
}

void write_output(const std::string& out, const std::string& text) {
    if (out == "-") {
        std::fwrite(text.data(), 1, text.size(), stdout);
        return;
    }
    std::ofstream file(out, std::ios::binary);
    if (!file) throw io_error("cannot open output file: " + out);
    file << text;
    if (!file) throw io_error("write failed: " + out);
}

void add_common(CLI::App* cmd, CommonOpts& c) {
    cmd->add_option("--config", c.config, "parameter config file (key = value)")->required();
    cmd->add_option("--set", c.overrides, "override a parameter, e.g. --set nu=1.03")->take_all();
    cmd->add_option("--out", c.out, "output path, '-' for stdout (default)");
    cmd->add_option("--jobs", c.jobs, "worker threads (default: available cores)");
}

int cmd_validate(const CommonOpts& c) {
    const ModelParams p = load_params(c);
    const ValidationReport report = validate(p);
    std::fputs(report.to_string().c_str(), report.ok() ? stdout : stderr);
    return report.ok() ? kOk : kValidationFailure;
}

int cmd_steady(const CommonOpts& c, bool numeric) {
    const ModelParams p = load_params(c);
    const SteadyState ss = numeric ? solve_numeric(p) : solve_closed_form(p);
    write_output(c.out, steady_state_csv_header() + "\n" + steady_state_csv_row(ss) + "\n");
    return kOk;
}

int cmd_sweep(const CommonOpts& c, const std::string& axis_name_str, double from, double to,
              std::size_t points, bool log_grid) {
    const ModelParams p = load_params(c);
    const Axis axis = axis_from_name(axis_name_str);
    const std::vector<double> grid =
        log_grid ? logspace(from, to, points) : linspace(from, to, points);
    const auto rows = sweep(p, axis, grid, c.jobs);
    std::string text = sweep_csv_header() + "\n";
    for (const auto& row : rows) text += sweep_csv_row(row) + "\n";
    write_output(c.out, text);
    return kOk;
}

int cmd_transition(const CommonOpts& c, double k0, double k0_scale, int horizon, double tol,
                   bool shooting) {
    const ModelParams p = load_params(c);
    const SteadyState ss = solve_closed_form(p);
    const double start = k0 > 0.0 ? k0 : k0_scale * ss.K;
    TransitionPath path;
    if (shooting) {
        path = solve_by_shooting(p, start, horizon).path;
    } else {
        TransitionOptions opt;
        opt.tol = tol;
        path = solve_transition(p, start, horizon, opt);
    }
    std::string text = transition_csv_header() + "\n";
    for (int t = 0; t <= path.horizon; ++t) text += transition_csv_row(t, path) + "\n";
    write_output(c.out, text);
    return kOk;
}

int cmd_firms(const CommonOpts& c, std::size_t count, std::uint64_t seed) {
    const ModelParams p = load_params(c);
    const SteadyState ss = solve_closed_form(p);
    const auto panel = sample_panel(count, seed, p, ss.abar, c.jobs);
    std::string text = firm_csv_header() + "\n";
    for (const auto& draw : panel) {
        FirmRecord row = draw.active ? firm_policy(draw.a, ss, p) : FirmRecord{};
        row.j = draw.j;  // keep the sampled draw, not the cdf-implied one
        row.a = draw.a;
        row.active = draw.active;
        text += firm_csv_row(row) + "\n";
    }
    write_output(c.out, text);
    return kOk;
}

int cmd_costcurves(const CommonOpts& c, double tech, double tech_rel, double lo_frac,
                   double hi_frac, std::size_t points) {
    const ModelParams p = load_params(c);
    const SteadyState ss = solve_closed_form(p);
    const double a = tech > 0.0 ? tech : tech_rel * ss.abar;
    if (!(a >= 1.0)) throw malformed_input_error("requested technology is below the minimum draw");
    const auto grid = default_cost_grid(ss, p, lo_frac, hi_frac, points);
    const auto curve = cost_curves(a, grid, ss.r, ss.w, p);
    std::string text = cost_curve_csv_header() + "\n";
    for (const auto& pt : curve) text += cost_curve_csv_row(pt) + "\n";
    write_output(c.out, text);
    return kOk;
}

int cmd_calibrate(const CommonOpts& c, double target_j, double real_rate,
                  const std::string& series_path) {
    const ModelParams p = load_params(c);
    if (!series_path.empty()) {
        const auto series = ingest_series(series_path);
        const auto rows = calibrate_theta_series(series, p.phi, p.alpha);
        std::string text = theta_series_csv_header() + "\n";
        for (const auto& row : rows) text += theta_series_csv_row(row) + "\n";
        write_output(c.out, text);
        return kOk;
    }
    std::string text;
    if (real_rate > 0.0) {
        const double beta = beta_from_real_rate(real_rate);
        text += "beta_from_real_rate," + format_full(beta) + "\n";
        text += "rental_rate_from_beta," + format_full(rental_rate_from_beta(p.beta, p.delta)) + "\n";
        if (std::abs(beta - p.beta) > 1e-3)
            text += "note,implied beta differs from the configured " + format_full(p.beta) +
                    "; the source's two rate conventions disagree\n";
    }
    text += "kappa_max," + format_full(kappa_max(p)) + "\n";
    ModelParams solved = p;
    if (target_j >= 0.0) {
        solved.phi = phi_from_inactive_share(target_j, p);
        text += "phi_for_target_j," + format_full(solved.phi) + "\n";
    }
    const SteadyState ss = solve_closed_form(solved);
    const OverheadRatio ratio = kappa_to_overhead_ratio(ss, solved);
    text += "inactive_share," + format_full(ss.J) + "\n";
    text += "kappa_over_phi_w," + format_full(ratio.ratio) + "\n";
    text +=
        "kappa_over_phi_w_literature_anchor," + format_full(OverheadRatio::literature_anchor) + "\n";
    if (ratio.flag_geq_one) text += "warning,entry cost exceeds overhead cost\n";
    write_output(c.out, text);
    return kOk;
}

int cmd_scenario(const std::vector<std::string>& specs, bool do_compare, const std::string& out,
                 int jobs) {
    std::vector<ScenarioResult> results;
    results.reserve(specs.size());
    for (const auto& path : specs) results.push_back(run_scenario(load_scenario_spec(path), jobs));
    if (do_compare) {
        write_output(out, comparison_csv(compare_scenarios(results)));
        return kOk;
    }
    if (results.size() != 1)
        throw malformed_input_error("give exactly one --spec, or pass --compare for several");
    std::string text = scenario_csv_header() + "\n";
    for (const auto& row : results.front().years) text += scenario_csv_row(row) + "\n";
    write_output(out, text);
    return kOk;
}

int cmd_selftest(int jobs) {
    const ModelParams bench;
    int failures = 0;
    auto line = [&](const char* name, bool ok, double value) {
        std::printf("%-48s %s   %.3e\n", name, ok ? "PASS" : "FAIL", value);
        if (!ok) ++failures;
    };
    std::printf("internal oracle suite (benchmark calibration)\n");

    // closed-form power mean against quadrature of the defining integral
    std::mt19937_64 rng(20240817);
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    double worst_gamma = 0.0;
    for (int i = 0; i < 20; ++i) {
        ModelParams p = bench;
        p.nu = 0.9 + 0.2 * unif(rng);
        p.mu = p.nu + 0.15 + 0.2 * unif(rng);
        const double cutoff = 0.9 * unif(rng);
        const double closed = power_mean_closed(cutoff, p);
        const double quad = power_mean_quadrature(cutoff, p);
        worst_gamma = std::max(worst_gamma, std::abs(closed - quad) / quad);
    }
    line("power-mean closed form vs quadrature (20x)", worst_gamma < 1e-10, worst_gamma);

    // analytic elasticities against central differences
    const FdCheck phi_check = fd_check(bench, Axis::phi);
    line("dlnTFP/dlnphi analytic vs finite difference", phi_check.rel_err < 1e-6, phi_check.rel_err);
    const FdCheck kappa_check = fd_check(bench, Axis::kappa);
    line("dlnAhat/dlnkappa analytic vs finite difference", kappa_check.rel_err < 1e-6,
         kappa_check.rel_err);

    // firm-panel aggregation identities
    const SteadyState ss = solve_closed_form(bench);
    const AggregationReport quad = aggregation_check_quadrature(ss, bench);
    line("aggregation identities (quadrature panel)", quad.within(1e-8, 3.0),
         quad.max_abs_rel_err());
    const AggregationReport mc = aggregation_check_monte_carlo(ss, bench, 200000, 99, jobs);
    double worst_z = 0.0;
    for (const auto& c : mc.checks) worst_z = std::max(worst_z, std::abs(c.z));
    line("aggregation identities (monte carlo, 3 s.e.)", mc.within(1e-8, 3.0), worst_z);

    // numeric root of the reduced system against the closed form
    const SteadyState numeric = solve_numeric(bench);
    const double gap = std::abs(numeric.K - ss.K) / ss.K;
    line("steady state: newton vs closed form", gap < 1e-8, gap);

    std::printf("%s\n", failures == 0 ? "selftest: all checks passed" : "selftest: FAILURES");
    return failures == 0 ? kOk : 1;
}

int dispatch(int argc, char** argv) {
    CLI::App app{"heterogeneous-firm GE model with scale economies and Pareto technology"};
    app.require_subcommand(1);

    CommonOpts common;

    auto* validate_cmd =
        app.add_subcommand("validate", "check a parameter config against the model assumptions");
    add_common(validate_cmd, common);

    auto* steady_cmd = app.add_subcommand(
        "steady",
        "solve the steady state; emits CSV: " + steady_state_csv_header());
    add_common(steady_cmd, common);
    bool steady_numeric = false;
    steady_cmd->add_flag("--numeric", steady_numeric,
                         "use the Newton solver instead of the closed form");

    auto* sweep_cmd = app.add_subcommand(
        "sweep", "steady-state TFP decomposition along one parameter axis; emits CSV: " +
                     sweep_csv_header());
    add_common(sweep_cmd, common);
    std::string sweep_axis;
    double sweep_from = 0.0, sweep_to = 0.0;
    std::size_t sweep_points = 21;
    bool sweep_log = false;
    sweep_cmd->add_option("--axis", sweep_axis, "phi | nu | mu | kappa")->required();
    sweep_cmd->add_option("--from", sweep_from)->required();
    sweep_cmd->add_option("--to", sweep_to)->required();
    sweep_cmd->add_option("--points", sweep_points, "grid size (default 21)");
    sweep_cmd->add_flag("--log", sweep_log, "log-spaced grid (phi and kappa axes)");

    auto* transition_cmd = app.add_subcommand(
        "transition",
        "perfect-foresight path to the steady state; emits CSV: " + transition_csv_header());
    add_common(transition_cmd, common);
    double tr_k0 = 0.0, tr_scale = 0.9, tr_tol = 1e-9;
    int tr_horizon = 200;
    bool tr_shoot = false;
    transition_cmd->add_option("--k0", tr_k0, "initial capital (absolute)");
    transition_cmd->add_option("--k0-scale", tr_scale,
                               "initial capital relative to the steady state (default 0.9)");
    transition_cmd->add_option("--horizon", tr_horizon, "periods (default 200)");
    transition_cmd->add_option("--tol", tr_tol, "max relative residual (default 1e-9)");
    transition_cmd->add_flag("--shooting", tr_shoot,
                             "use the forward-shooting oracle instead of stacked Newton");

    auto* firms_cmd = app.add_subcommand(
        "firms", "sampled firm panel at the steady state; emits CSV: " + firm_csv_header());
    add_common(firms_cmd, common);
    std::size_t firms_count = 10000;
    std::uint64_t firms_seed = 1;
    firms_cmd->add_option("--count", firms_count, "number of draws (default 10000)");
    firms_cmd->add_option("--seed", firms_seed, "64-bit sampling seed (default 1)");

    auto* cost_cmd = app.add_subcommand(
        "costcurves",
        "cost curves and scale-economies schedule; emits CSV: " + cost_curve_csv_header());
    add_common(cost_cmd, common);
    double cost_tech = 0.0, cost_tech_rel = 2.0, cost_lo = 0.01, cost_hi = 100.0;
    std::size_t cost_points = 200;
    cost_cmd->add_option("--tech", cost_tech, "technology level (absolute)");
    cost_cmd->add_option("--tech-rel", cost_tech_rel, "technology relative to the cutoff (default 2)");
    cost_cmd->add_option("--lo", cost_lo, "grid start as a fraction of threshold output (default 0.01)");
    cost_cmd->add_option("--hi", cost_hi, "grid end as a fraction of threshold output (default 100)");
    cost_cmd->add_option("--points", cost_points, "grid size (default 200)");

    auto* cal_cmd = app.add_subcommand(
        "calibrate",
        "calibration targets and diagnostics; with --series emits CSV: " +
            theta_series_csv_header());
    add_common(cal_cmd, common);
    double cal_target_j = -1.0, cal_rate = -1.0;
    std::string cal_series;
    cal_cmd->add_option("--target-j", cal_target_j, "solve phi for this inactive share");
    cal_cmd->add_option("--real-rate", cal_rate, "net real rate for the beta calibration");
    cal_cmd->add_option("--series", cal_series, "annual CSV for the per-year theta back-out");

    auto* scen_cmd = app.add_subcommand(
        "scenario", "year-by-year steady states from an annual series; emits CSV: " +
                        scenario_csv_header());
    std::vector<std::string> scen_specs;
    bool scen_compare = false;
    std::string scen_out = "-";
    int scen_jobs = static_cast<int>(std::thread::hardware_concurrency());
    scen_cmd->add_option("--spec", scen_specs, "scenario spec file (repeatable)")->required();
    scen_cmd->add_flag("--compare", scen_compare, "emit a comparison table across specs");
    scen_cmd->add_option("--out", scen_out, "output path, '-' for stdout");
    scen_cmd->add_option("--jobs", scen_jobs, "worker threads");

    auto* selftest_cmd = app.add_subcommand("selftest", "run the built-in oracle suite");
    int selftest_jobs = static_cast<int>(std::thread::hardware_concurrency());
    selftest_cmd->add_option("--jobs", selftest_jobs, "worker threads");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForVersion& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kUsage;
    }

    if (app.got_subcommand(validate_cmd)) return cmd_validate(common);
    if (app.got_subcommand(steady_cmd)) return cmd_steady(common, steady_numeric);
    if (app.got_subcommand(sweep_cmd))
        return cmd_sweep(common, sweep_axis, sweep_from, sweep_to, sweep_points, sweep_log);
    if (app.got_subcommand(transition_cmd))
        return cmd_transition(common, tr_k0, tr_scale, tr_horizon, tr_tol, tr_shoot);
    if (app.got_subcommand(firms_cmd)) return cmd_firms(common, firms_count, firms_seed);
    if (app.got_subcommand(cost_cmd))
        return cmd_costcurves(common, cost_tech, cost_tech_rel, cost_lo, cost_hi, cost_points);
    if (app.got_subcommand(cal_cmd)) return cmd_calibrate(common, cal_target_j, cal_rate, cal_series);
    if (app.got_subcommand(scen_cmd)) return cmd_scenario(scen_specs, scen_compare, scen_out, scen_jobs);
    if (app.got_subcommand(selftest_cmd)) return cmd_selftest(selftest_jobs);
    return kUsage;
}

}  // namespace

int main(int argc, char** argv) {
    try {
        return dispatch(argc, argv);
    } catch (const assumption_error& e) {
        std::fprintf(stderr, "%s\n", e.what());
        return kValidationFailure;
    } catch (const infeasible_entry_cost_error& e) {
        std::fprintf(stderr, "%s\n", e.what());
        return kValidationFailure;
    } catch (const malformed_input_error& e) {
        std::fprintf(stderr, "%s\n", e.what());
        return kValidationFailure;
    } catch (const divergent_moment_error& e) {
        std::fprintf(stderr, "%s\n", e.what());
        return kValidationFailure;
    } catch (const solver_error& e) {
        std::fprintf(stderr, "%s\n", e.what());
        return kSolverFailure;
    } catch (const horizon_too_short_error& e) {
        std::fprintf(stderr, "%s\n", e.what());
        return kSolverFailure;
    } catch (const calibration_error& e) {
        std::fprintf(stderr, "%s\n", e.what());
        return kSolverFailure;
    } catch (const parse_error& e) {
        std::fprintf(stderr, "%s (%s:%ld)\n", e.what(), e.path.c_str(), e.line);
        return kIoFailure;
    } catch (const io_error& e) {
        std::fprintf(stderr, "%s\n", e.what());
        return kIoFailure;
    } catch (const model_error& e) {
        std::fprintf(stderr, "%s\n", e.what());
        return kSolverFailure;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "unexpected error: %s\n", e.what());
        return 70;
    }
}
