#include "firmscale/scenario.hpp"

#include <cmath>
#include <cctype>
#include <limits>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>

#include "firmscale/calibration.hpp"
#include "firmscale/numeric.hpp"

namespace firmscale {

const char* scenario_mode_name(ScenarioMode m) {
    switch (m) {
        case ScenarioMode::vary_nu_mu: return "vary_nu_mu";
        case ScenarioMode::vary_phi_mu: return "vary_phi_mu";
        case ScenarioMode::vary_phi_only: return "vary_phi_only";
        case ScenarioMode::fixed_mu_counterfactual: return "fixed_mu_counterfactual";
        case ScenarioMode::fixed_all_baseline: return "fixed_all_baseline";
    }
    return "?";
}

ScenarioMode scenario_mode_from_name(const std::string& name) {
    if (name == "vary_nu_mu") return ScenarioMode::vary_nu_mu;
    if (name == "vary_phi_mu") return ScenarioMode::vary_phi_mu;
    if (name == "vary_phi_only") return ScenarioMode::vary_phi_only;
    if (name == "fixed_mu_counterfactual") return ScenarioMode::fixed_mu_counterfactual;
    if (name == "fixed_all_baseline") return ScenarioMode::fixed_all_baseline;
    throw malformed_input_error("unknown scenario mode '" + name + "'");
}

namespace {

std::string_view trim(std::string_view s) {
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
    return s;
}

double parse_num(const std::string& text, const std::string& origin, long line) {
    const char* begin = text.c_str();
    char* end = nullptr;
    const double v = std::strtod(begin, &end);
    if (end == begin || *end != '\0')
        throw parse_error("cannot parse numeric value '" + text + "'", origin, line);
    return v;
}

}  // namespace

ScenarioSpec load_scenario_spec_text(const std::string& text, const std::string& origin) {
    ScenarioSpec spec;
    std::map<std::string, bool> seen;
    bool base_year_set = false;
    std::istringstream stream(text);
    std::string raw;
    long line_no = 0;
    while (std::getline(stream, raw)) {
        ++line_no;
        std::string_view line = raw;
        if (const auto hash = line.find('#'); hash != std::string_view::npos)
            line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string_view::npos)
            throw parse_error("expected 'key = value', got '" + std::string(line) + "'", origin,
                              line_no);
        const std::string key{trim(line.substr(0, eq))};
        const std::string value{trim(line.substr(eq + 1))};
        if (seen[key]) throw parse_error("duplicate key '" + key + "'", origin, line_no);
        seen[key] = true;
        if (key == "name") spec.name = value;
        else if (key == "series") spec.series_path = value;
        else if (key == "mode") spec.mode = scenario_mode_from_name(value);
        else if (key == "base_year") {
            spec.base_year = static_cast<int>(parse_num(value, origin, line_no));
            base_year_set = true;
        } else if (key == "kappa") {
            if (value == "auto") {
                spec.kappa_auto = true;
            } else {
                spec.base.kappa = parse_num(value, origin, line_no);
                spec.kappa_auto = false;
            }
        } else if (key == "sigma") spec.base.sigma = parse_num(value, origin, line_no);
        else if (key == "beta") spec.base.beta = parse_num(value, origin, line_no);
        else if (key == "delta") spec.base.delta = parse_num(value, origin, line_no);
        else if (key == "alpha") spec.base.alpha = parse_num(value, origin, line_no);
        else if (key == "theta") spec.base.theta = parse_num(value, origin, line_no);
        else if (key == "phi") spec.base.phi = parse_num(value, origin, line_no);
        else if (key == "nu") spec.base.nu = parse_num(value, origin, line_no);
        else if (key == "mu") {
            spec.base.mu = parse_num(value, origin, line_no);
            spec.mu_explicit = true;
        }
        else throw parse_error("unknown scenario key '" + key + "'", origin, line_no);
    }
    if (spec.series_path.empty() && spec.mode != ScenarioMode::fixed_all_baseline)
        throw parse_error("scenario spec must name a series file", origin, 0);
    if (!base_year_set) throw parse_error("scenario spec must set base_year", origin, 0);
    if (spec.name.empty()) spec.name = scenario_mode_name(spec.mode);
    return spec;
}

ScenarioSpec load_scenario_spec(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw io_error("cannot open scenario spec: " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    ScenarioSpec spec = load_scenario_spec_text(buf.str(), path);
    if (!spec.series_path.empty()) {
        const std::filesystem::path series(spec.series_path);
        if (series.is_relative())
            spec.series_path = (std::filesystem::path(path).parent_path() / series).string();
    }
    return spec;
}

namespace {

struct YearInputs {
    int year;
    ModelParams params;             // kappa possibly provisional
    std::optional<double> share;    // overhead-share target for phi modes
    std::optional<double> data_index;
};

bool mode_needs_share(ScenarioMode m) {
    return m == ScenarioMode::vary_phi_mu || m == ScenarioMode::vary_phi_only;
}

std::vector<YearInputs> year_inputs(const ScenarioSpec& spec, const std::vector<SeriesRow>& series) {
    std::vector<YearInputs> years;
    years.reserve(series.size());
    for (const auto& row : series) {
        YearInputs y{};
        y.year = row.year;
        y.params = spec.base;
        y.data_index = row.tfp_data_index;
        auto need = [&](const std::optional<double>& v, const char* col) -> double {
            if (!v)
                throw model_error("scenario '" + spec.name + "': year " + std::to_string(row.year) +
                                  " is missing required column " + col);
            return *v;
        };
        switch (spec.mode) {
            case ScenarioMode::vary_nu_mu:
                y.params.nu = need(row.nu, "nu");
                y.params.mu = need(row.mu, "mu");
                break;
            case ScenarioMode::fixed_mu_counterfactual:
                y.params.nu = need(row.nu, "nu");
                break;
            case ScenarioMode::vary_phi_mu:
                y.params.mu = need(row.mu, "mu");
                y.share = need(row.overhead_share, "overhead_share");
                break;
            case ScenarioMode::vary_phi_only:
                y.share = need(row.overhead_share, "overhead_share");
                break;
            case ScenarioMode::fixed_all_baseline:
                break;
        }
        years.push_back(y);
    }
    return years;
}

// Overhead cost that matches the target w*phi/Y at the year's steady state.
// s_l = w L / Y is a parameter constant, so the target pins phi almost
// linearly. Bracketing may probe phi values whose entry-cost bound falls
// below the configured kappa; there the share is continued analytically with
// s_l * phi (its exact value on the feasible side), and the accepted root is
// verified against a genuine steady-state solve.
double solve_phi_for_share(const ModelParams& params, double share, double tol) {
    const DerivedConstants d = derived_constants(params);
    const double seed = share / d.s_l;
    auto achieved = [&](double phi) {
        ModelParams p = params;
        p.phi = phi;
        try {
            const SteadyState ss = solve_closed_form(p);
            return ss.w * phi / ss.Y;
        } catch (const infeasible_entry_cost_error&) {
            return d.s_l * phi;
        }
    };
    double lo = 0.5 * seed, hi = 2.0 * seed;
    double f_lo = achieved(lo) - share, f_hi = achieved(hi) - share;
    for (int grow = 0; grow < 8 && (f_lo > 0.0) == (f_hi > 0.0); ++grow) {
        lo *= 0.5;
        hi *= 2.0;
        f_lo = achieved(lo) - share;
        f_hi = achieved(hi) - share;
    }
    const double phi =
        brent_root([&](double v) { return achieved(v) - share; }, lo, hi, 1e-15, tol * 0.1);
    ModelParams check = params;
    check.phi = phi;
    const SteadyState ss = solve_closed_form(check);
    if (std::abs(ss.w * phi / ss.Y - share) > tol)
        throw calibration_error("overhead-share solve missed its target");
    return phi;
}

}  // namespace

ScenarioResult run_scenario(const ScenarioSpec& spec, int jobs) {
    std::vector<SeriesRow> series;
    if (spec.mode == ScenarioMode::fixed_all_baseline && spec.series_path.empty()) {
        // degenerate: no series needed; single row at the base year
        series.push_back(SeriesRow{spec.base_year, {}, {}, {}, {}, {}});
    } else {
        series = ingest_series(spec.series_path);
    }

    bool base_found = false;
    for (const auto& row : series) base_found = base_found || row.year == spec.base_year;
    if (!base_found)
        throw model_error("scenario '" + spec.name + "': base year " +
                          std::to_string(spec.base_year) + " is not in the series");

    std::vector<YearInputs> years = year_inputs(spec, series);

    // Fixed-mu counterfactual: an explicit spec mu wins; otherwise hold mu at
    // its base-year series value.
    if (spec.mode == ScenarioMode::fixed_mu_counterfactual && !spec.mu_explicit) {
        bool found = false;
        for (const auto& row : series)
            if (row.year == spec.base_year && row.mu) {
                for (auto& y : years) y.params.mu = *row.mu;
                found = true;
            }
        if (!found)
            throw model_error("scenario '" + spec.name +
                              "': fixed-mu mode needs mu in the spec or in the base-year row");
    }

    // Provisional phi for share-matching modes (kappa-free closed form);
    // needed before the kappa bound can be evaluated.
    if (mode_needs_share(spec.mode)) {
        for (auto& y : years) {
            const DerivedConstants d = derived_constants(y.params);
            y.params.phi = *y.share / d.s_l;
        }
    }

    // kappa = auto: largest entry cost admissible in every year.
    double kappa_used = spec.base.kappa;
    if (spec.kappa_auto) {
        double bound = std::numeric_limits<double>::infinity();
        for (const auto& y : years) bound = std::min(bound, kappa_max(y.params));
        kappa_used = bound;
    }
    for (auto& y : years) y.params.kappa = kappa_used;

    // Final phi pass at the definitive kappa: full steady-state root solve.
    if (mode_needs_share(spec.mode)) {
        for (auto& y : years) y.params.phi = solve_phi_for_share(y.params, *y.share, spec.phi_share_tol);
    }

    ScenarioResult result;
    result.name = spec.name;
    result.mode = spec.mode;
    result.base_year = spec.base_year;
    result.years.resize(years.size());

    std::vector<std::string> failures(years.size());
    parallel_for(years.size(), jobs, [&](std::size_t i) {
        const YearInputs& y = years[i];
        ScenarioYearResult out{};
        out.year = y.year;
        out.params = y.params;
        try {
            require_valid(y.params);
            out.ss = solve_closed_form(y.params);
            out.ln_omega = std::log(out.ss.omega);
            out.ln_ahat = std::log(out.ss.ahat);
            out.tfp_data_index = y.data_index;
            if (y.share) out.achieved_overhead_share = out.ss.w * y.params.phi / out.ss.Y;
        } catch (const model_error& e) {
            failures[i] = "year " + std::to_string(y.year) + ": " + e.what();
        }
        result.years[i] = out;
    });
    for (const auto& f : failures)
        if (!f.empty()) throw model_error("scenario '" + spec.name + "' infeasible: " + f);

    double base_tfp = 0.0;
    for (const auto& y : result.years)
        if (y.year == spec.base_year) base_tfp = y.ss.tfp;
    for (auto& y : result.years) y.tfp_model_index = y.ss.tfp / base_tfp;
    return result;
}

std::string scenario_csv_header() {
    return "year,nu,mu,phi,kappa,theta,K,C,Y,r,w,abar,J,N,u,s_l,ln_omega,ln_ahat,"
           "tfp_model_index,tfp_data_index";
}

std::string scenario_csv_row(const ScenarioYearResult& row) {
    std::string out = std::to_string(row.year);
    const double cols[18] = {row.params.nu, row.params.mu,  row.params.phi, row.params.kappa,
                             row.params.theta, row.ss.K,    row.ss.C,       row.ss.Y,
                             row.ss.r,      row.ss.w,       row.ss.abar,    row.ss.J,
                             row.ss.N,      row.ss.u,       row.ss.s_l,     row.ln_omega,
                             row.ln_ahat,   row.tfp_model_index};
    for (double c : cols) {
        out += ',';
        out += format_full(c);
    }
    out += ',';
    out += row.tfp_data_index ? format_full(*row.tfp_data_index) : "";
    return out;
}

ComparisonTable compare_scenarios(const std::vector<ScenarioResult>& results) {
    if (results.empty()) throw malformed_input_error("compare_scenarios: no results");
    ComparisonTable table;
    for (const auto& r : results) table.names.push_back(r.name);

    // common year coverage, in the first result's order
    for (const auto& y0 : results.front().years) {
        bool everywhere = true;
        for (const auto& r : results) {
            bool found = false;
            for (const auto& y : r.years) found = found || y.year == y0.year;
            everywhere = everywhere && found;
        }
        if (!everywhere) continue;
        ComparisonRow row;
        row.year = y0.year;
        for (const auto& r : results)
            for (const auto& y : r.years)
                if (y.year == y0.year) row.indices.push_back(y.tfp_model_index);
        row.data_index = y0.tfp_data_index;
        table.rows.push_back(row);
    }
    if (table.rows.empty()) throw model_error("compare_scenarios: results share no years");

    table.rmse_vs_data.assign(results.size(), std::numeric_limits<double>::quiet_NaN());
    std::size_t with_data = 0;
    for (const auto& row : table.rows) with_data += row.data_index.has_value();
    if (with_data > 0) {
        for (std::size_t i = 0; i < results.size(); ++i) {
            double acc = 0.0;
            for (const auto& row : table.rows)
                if (row.data_index) acc += std::pow(row.indices[i] - *row.data_index, 2);
            table.rmse_vs_data[i] = std::sqrt(acc / static_cast<double>(with_data));
        }
    }
    return table;
}

std::string comparison_csv(const ComparisonTable& table) {
    std::string out = "year";
    for (const auto& n : table.names) out += ",index_" + n;
    for (std::size_t i = 1; i < table.names.size(); ++i)
        out += ",diff_" + table.names[i] + "_vs_" + table.names[0];
    out += ",tfp_data_index\n";
    for (const auto& row : table.rows) {
        out += std::to_string(row.year);
        for (double v : row.indices) {
            out += ',';
            out += format_full(v);
        }
        for (std::size_t i = 1; i < row.indices.size(); ++i) {
            out += ',';
            out += format_full(row.indices[i] - row.indices[0]);
        }
        out += ',';
        out += row.data_index ? format_full(*row.data_index) : "";
        out += '\n';
    }
    out += "rmse_vs_data";
    for (double v : table.rmse_vs_data) {
        out += ',';
        out += format_full(v);
    }
    for (std::size_t i = 1; i < table.names.size(); ++i) out += ',';
    out += ",\n";
    return out;
}

}  // namespace firmscale
