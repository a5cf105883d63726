#include "firmscale/firms.hpp"

#include <cmath>

#include "firmscale/numeric.hpp"
#include "firmscale/quadrature.hpp"

namespace firmscale {

namespace {

struct ThresholdFirm {
    double k;
    double ell;
    double py;
    double y;
};

// Threshold-firm quantities pinned by aggregates: the threshold firm gets a
// 1/Gamma^(1/(mu-nu)) slice of per-firm capital and production labour.
ThresholdFirm threshold_firm(const SteadyState& ss, const ModelParams& p) {
    const double slice = std::pow(ss.abar / ss.ahat, 1.0 / (p.mu - p.nu));
    ThresholdFirm t{};
    t.k = slice * ss.K / ss.N;
    t.ell = slice * ss.u / ss.N;  // L = 1
    t.py = ss.r * t.k * p.mu / (p.alpha * p.nu);
    t.y = ss.abar * std::pow(std::pow(t.k, p.alpha) * std::pow(t.ell, 1.0 - p.alpha), p.nu);
    return t;
}

}  // namespace

FirmRecord firm_policy(double a, const SteadyState& ss, const ModelParams& p) {
    if (!(a >= 1.0))
        throw malformed_input_error("firm_policy: technology below the minimum draw");
    FirmRecord f{};
    f.a = a;
    f.j = pareto_cdf(a, p.theta);
    f.active = a >= ss.abar;
    if (!f.active) return f;

    const ThresholdFirm t = threshold_firm(ss, p);
    const double rel = std::pow(a / ss.abar, 1.0 / (p.mu - p.nu));
    f.k = t.k * rel;
    f.ell = t.ell * rel;
    f.ell_tot = f.ell + p.phi;
    f.py = t.py * rel;
    f.y = t.y * std::pow(a / ss.abar, p.mu / (p.mu - p.nu));
    f.pi = p.phi * ss.w * (rel - 1.0);
    f.s = p.nu + (p.mu - p.nu) / rel;
    return f;
}

double total_labour_elasticity(double ell, const ModelParams& p) {
    if (!(ell > 0.0)) throw malformed_input_error("total_labour_elasticity: ell must be positive");
    return p.nu * (1.0 - p.alpha) * (1.0 + p.phi / ell);
}

LabourRiseResult production_labour_response(double ell_tot, double overhead, double rise) {
    if (!(ell_tot > overhead))
        throw malformed_input_error("production_labour_response: total labour must exceed overhead");
    LabourRiseResult r{};
    r.ell_before = ell_tot - overhead;
    r.ell_after = ell_tot * (1.0 + rise) - overhead;
    r.pct_change = (r.ell_after - r.ell_before) / r.ell_before;
    return r;
}

double unit_cost_constant(double r, double w, double alpha) {
    return std::pow(r / alpha, alpha) * std::pow(w / (1.0 - alpha), 1.0 - alpha);
}

std::vector<CostCurvePoint> cost_curves(double a, std::span<const double> grid, double r, double w,
                                        const ModelParams& p) {
    if (!(p.nu < p.mu)) throw malformed_input_error("cost_curves: requires nu < mu");
    const double cbar = unit_cost_constant(r, w, p.alpha);
    std::vector<CostCurvePoint> out;
    out.reserve(grid.size());
    double prev = 0.0;
    for (double y : grid) {
        if (!(y > 0.0)) throw malformed_input_error("cost_curves: output grid must be positive");
        if (!(y > prev)) throw malformed_input_error("cost_curves: output grid must be ascending");
        prev = y;
        CostCurvePoint c{};
        c.y = y;
        const double vc = cbar * std::pow(y / a, 1.0 / p.nu);
        c.avc = vc / y;
        c.mc = vc / (p.nu * y);
        c.afc = w * p.phi / y;
        c.atc = c.avc + c.afc;
        c.s_of_y = c.atc / c.mc;
        out.push_back(c);
    }
    return out;
}

double minimum_efficient_scale(double a, double r, double w, const ModelParams& p) {
    if (!(p.nu < 1.0))
        throw malformed_input_error("minimum_efficient_scale: ATC has no interior minimum unless nu < 1");
    const double cbar = unit_cost_constant(r, w, p.alpha);
    // d/dy [cbar a^(-1/nu) y^(1/nu - 1) + w phi / y] = 0
    return std::pow(w * p.phi * p.nu / (cbar * (1.0 - p.nu)), p.nu) * a;
}

std::vector<double> default_cost_grid(const SteadyState& ss, const ModelParams& p, double lo_frac,
                                      double hi_frac, std::size_t points) {
    const double y_thr = firm_policy(ss.abar, ss, p).y;
    return logspace(lo_frac * y_thr, hi_frac * y_thr, points);
}

double AggregationReport::max_abs_rel_err() const {
    double m = 0.0;
    for (const auto& c : checks) m = std::max(m, std::abs(c.rel_err));
    return m;
}

bool AggregationReport::within(double tol_quadrature, double z_limit) const {
    for (const auto& c : checks) {
        if (monte_carlo) {
            if (std::abs(c.z) > z_limit) return false;
        } else {
            if (std::abs(c.rel_err) > tol_quadrature) return false;
        }
    }
    return true;
}

AggregationReport aggregation_check_quadrature(const SteadyState& ss, const ModelParams& p,
                                               double abs_tol) {
    AggregationReport rep;
    rep.monte_carlo = false;
    const double x = p.theta_mu_nu();
    const double endpoint_power = 1.0 / x;  // firm size grows like (1-j)^(-1/x)

    auto integrate_policy = [&](auto&& value_of) {
        auto f = [&](double, double one_minus_j) {
            const double a = std::pow(one_minus_j, -1.0 / p.theta);
            return value_of(firm_policy(a, ss, p));
        };
        return integrate_with_endpoint_power(f, ss.J, endpoint_power, abs_tol).value;
    };

    const double k_int = integrate_policy([](const FirmRecord& f) { return f.k; });
    const double l_int = integrate_policy([](const FirmRecord& f) { return f.ell_tot; });
    const double y_pow_int =
        integrate_policy([&](const FirmRecord& f) { return std::pow(f.y, 1.0 / p.mu); });

    const double K_rec = ss.E * k_int;
    const double L_rec = ss.E * l_int;
    const double Y_rec = ss.N * std::pow(y_pow_int / (1.0 - ss.J), p.mu);
    const double share_rec = ss.w * L_rec / Y_rec;

    auto add = [&](const std::string& name, double rec, double target) {
        rep.checks.push_back({name, rec, target, (rec - target) / target, 0.0, 0.0});
    };
    add("capital", K_rec, ss.K);
    add("labour", L_rec, 1.0);
    add("output", Y_rec, ss.Y);
    add("labour share", share_rec, ss.s_l);
    return rep;
}

AggregationReport aggregation_check_monte_carlo(const SteadyState& ss, const ModelParams& p,
                                                std::size_t n, std::uint64_t seed, int jobs) {
    AggregationReport rep;
    rep.monte_carlo = true;
    const auto panel = sample_panel(n, seed, p, ss.abar, jobs);

    std::vector<double> k_draws(n), l_draws(n), ypow_draws(n);
    parallel_for(n, jobs, [&](std::size_t i) {
        const FirmRecord f = panel[i].active ? firm_policy(panel[i].a, ss, p) : FirmRecord{};
        k_draws[i] = f.k;
        l_draws[i] = f.ell_tot;
        ypow_draws[i] = f.active ? std::pow(f.y, 1.0 / p.mu) : 0.0;
    });

    const double dn = static_cast<double>(n);
    auto mean_and_se = [&](const std::vector<double>& v) {
        const double mean = pairwise_sum(v) / dn;
        std::vector<double> sq(v.size());
        for (std::size_t i = 0; i < v.size(); ++i) sq[i] = (v[i] - mean) * (v[i] - mean);
        const double var = pairwise_sum(sq) / (dn - 1.0);
        return std::pair<double, double>(mean, std::sqrt(var / dn));
    };

    const auto [k_mean, k_se] = mean_and_se(k_draws);
    const auto [l_mean, l_se] = mean_and_se(l_draws);
    const auto [ypow_mean, ypow_se] = mean_and_se(ypow_draws);

    auto add = [&](const std::string& name, double rec, double se, double target) {
        const double rel = (rec - target) / target;
        rep.checks.push_back({name, rec, target, rel, se, se > 0.0 ? (rec - target) / se : 0.0});
    };

    // Each draw carries entrant mass E/n.
    add("capital", ss.E * k_mean, ss.E * k_se, ss.K);
    add("labour", ss.E * l_mean, ss.E * l_se, 1.0);

    // Y = N * [mean of y^(1/mu) over active / (1-J)]^mu; delta method for ^mu.
    const double m = ypow_mean / (1.0 - ss.J);
    const double m_se = ypow_se / (1.0 - ss.J);
    const double y_rec = ss.N * std::pow(m, p.mu);
    const double y_se = ss.N * p.mu * std::pow(m, p.mu - 1.0) * m_se;
    add("output", y_rec, y_se, ss.Y);

    const double l_rec = ss.E * l_mean;
    const double share = ss.w * l_rec / y_rec;
    // SE of the ratio, treating numerator and denominator as independent
    const double share_se =
        share * std::sqrt(std::pow(ss.E * l_se / l_rec, 2) + std::pow(y_se / y_rec, 2));
    add("labour share", share, share_se, ss.s_l);
    return rep;
}

std::string firm_csv_header() { return "j,a,active,k,ell,y,py,pi,s"; }

std::string firm_csv_row(const FirmRecord& f) {
    std::string out;
    out += format_full(f.j);
    out += ',';
    out += format_full(f.a);
    out += ',';
    out += f.active ? "1" : "0";
    const double cols[6] = {f.k, f.ell, f.y, f.py, f.pi, f.s};
    for (double c : cols) {
        out += ',';
        out += format_full(c);
    }
    return out;
}

std::string cost_curve_csv_header() { return "y,avc,afc,atc,mc,s"; }

std::string cost_curve_csv_row(const CostCurvePoint& c) {
    const double cols[6] = {c.y, c.avc, c.afc, c.atc, c.mc, c.s_of_y};
    std::string out;
    for (int i = 0; i < 6; ++i) {
        if (i) out += ',';
        out += format_full(cols[i]);
    }
    return out;
}

}  // namespace firmscale
