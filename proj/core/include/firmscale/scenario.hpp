#pragma once

#include <optional>
#include <string>
#include <vector>

#include "firmscale/series.hpp"
#include "firmscale/steady_state.hpp"

namespace firmscale {

/// Which columns drive the year-by-year parameter vector.
enum class ScenarioMode {
    vary_nu_mu,              ///< nu_t and mu_t from the series
    vary_phi_mu,             ///< phi_t solved from overhead share, mu_t from the series
    vary_phi_only,           ///< phi_t solved from overhead share, nu and mu fixed
    fixed_mu_counterfactual, ///< nu_t from the series, mu held fixed
    fixed_all_baseline       ///< all parameters fixed; flat index
};
const char* scenario_mode_name(ScenarioMode m);
ScenarioMode scenario_mode_from_name(const std::string& name);

/// Parsed scenario spec. `base` carries the fixed parameters; kappa may be
/// solved automatically as the largest entry cost admissible in every year
/// (the model-implied maximum over the series).
struct ScenarioSpec {
    std::string name;
    std::string series_path;
    ScenarioMode mode = ScenarioMode::vary_nu_mu;
    int base_year = 0;
    ModelParams base;
    bool kappa_auto = true;
    bool mu_explicit = false;     ///< spec set mu; otherwise fixed-mu modes take the base-year series value
    double phi_share_tol = 1e-8;  ///< achieved w*phi/Y vs target, per year
};

/// Flat key=value scenario config. Keys: name, series, mode, base_year,
/// sigma, beta, delta, alpha, theta, phi, kappa (number or "auto"), nu, mu.
/// Relative series paths resolve against the spec file's directory.
ScenarioSpec load_scenario_spec(const std::string& path);
ScenarioSpec load_scenario_spec_text(const std::string& text, const std::string& origin);

struct ScenarioYearResult {
    int year;
    ModelParams params;
    SteadyState ss;
    double ln_omega;
    double ln_ahat;
    double tfp_model_index;
    std::optional<double> tfp_data_index;
    std::optional<double> achieved_overhead_share;
};

struct ScenarioResult {
    std::string name;
    ScenarioMode mode;
    int base_year;
    std::vector<ScenarioYearResult> years;
};

/// Solves one steady state per year, normalises the TFP index to the base
/// year and carries the decomposition. Infeasible years raise model errors
/// naming the year.
ScenarioResult run_scenario(const ScenarioSpec& spec, int jobs = 1);

std::string scenario_csv_header();
std::string scenario_csv_row(const ScenarioYearResult& row);

/// Year-aligned comparison of several runs: per-year index differences from
/// the first run and RMSE against the data index when one is supplied.
struct ComparisonRow {
    int year;
    std::vector<double> indices;  ///< one per result, same order as input
    std::optional<double> data_index;
};
struct ComparisonTable {
    std::vector<std::string> names;
    std::vector<ComparisonRow> rows;
    std::vector<double> rmse_vs_data;  ///< NaN when no data index
};
ComparisonTable compare_scenarios(const std::vector<ScenarioResult>& results);

std::string comparison_csv(const ComparisonTable& table);

}  // namespace firmscale
