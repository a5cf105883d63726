#include "firmscale/statics.hpp"

#include <cmath>
#include <limits>

#include "firmscale/numeric.hpp"
#include "firmscale/pareto.hpp"

namespace firmscale {

TFPDecomposition decompose(const ModelParams& p) {
    const SteadyState s = solve_closed_form(p);
    TFPDecomposition d{};
    d.ln_omega = std::log(s.omega);
    d.ln_gamma = std::log(gamma_closed_form(p));
    d.ln_abar = std::log(s.abar);
    d.ln_ahat = d.ln_gamma + d.ln_abar;
    d.ln_tfp = d.ln_omega + d.ln_ahat;
    return d;
}

PhiElasticity dln_tfp_dln_phi(const ModelParams& p) {
    require_valid(p);
    PhiElasticity e{};
    e.allocative = -(1.0 - p.nu);
    e.technical = p.nu * (1.0 - p.alpha) / (p.theta_one_alpha_nu() - 1.0);
    e.total = e.allocative + e.technical;
    return e;
}

KappaElasticity dln_dkappa(const ModelParams& p) {
    require_valid(p);
    KappaElasticity e{};
    e.allocative = 0.0;
    e.technical = -(1.0 - p.alpha * p.nu) / (p.theta_one_alpha_nu() - 1.0);
    return e;
}

const char* axis_name(Axis a) {
    switch (a) {
        case Axis::phi: return "phi";
        case Axis::nu: return "nu";
        case Axis::mu: return "mu";
        case Axis::kappa: return "kappa";
    }
    return "?";
}

Axis axis_from_name(const std::string& name) {
    if (name == "phi") return Axis::phi;
    if (name == "nu") return Axis::nu;
    if (name == "mu") return Axis::mu;
    if (name == "kappa") return Axis::kappa;
    throw malformed_input_error("unknown sweep axis '" + name + "'");
}

namespace {

ModelParams with_axis(const ModelParams& base, Axis axis, double value) {
    ModelParams p = base;
    switch (axis) {
        case Axis::phi: p.phi = value; break;
        case Axis::nu: p.nu = value; break;
        case Axis::mu: p.mu = value; break;
        case Axis::kappa: p.kappa = value; break;
    }
    return p;
}

}  // namespace

std::vector<SweepRow> sweep(const ModelParams& base, Axis axis, std::span<const double> grid,
                            int jobs) {
    std::vector<SweepRow> rows(grid.size());
    parallel_for(grid.size(), jobs, [&](std::size_t i) {
        SweepRow row{};
        row.axis_value = grid[i];
        const ModelParams p = with_axis(base, axis, grid[i]);
        bool usable = false;
        try {
            usable = validate(p).ok();
        } catch (const malformed_input_error&) {
            usable = false;
        }
        if (usable) {
            const SteadyState s = solve_closed_form(p);
            row.valid = true;
            row.decomp = decompose(p);
            row.J = s.J;
            row.N = s.N;
            row.u = s.u;
            row.s_l = s.s_l;
        } else {
            const double nan = std::numeric_limits<double>::quiet_NaN();
            row.valid = false;
            row.decomp = {nan, nan, nan, nan, nan};
            row.J = row.N = row.u = row.s_l = nan;
        }
        rows[i] = row;
    });
    return rows;
}

std::string sweep_csv_header() {
    return "axis_value,valid,ln_tfp,ln_omega,ln_ahat,ln_abar,J,N,u,s_l";
}

std::string sweep_csv_row(const SweepRow& row) {
    std::string out = format_full(row.axis_value);
    out += ',';
    out += row.valid ? "1" : "0";
    const double cols[8] = {row.decomp.ln_tfp, row.decomp.ln_omega, row.decomp.ln_ahat,
                            row.decomp.ln_abar, row.J, row.N, row.u, row.s_l};
    for (double c : cols) {
        out += ',';
        out += format_full(c);
    }
    return out;
}

namespace {

double component_of(const TFPDecomposition& d, int component) {
    switch (component) {
        case 0: return d.ln_tfp;
        case 1: return d.ln_omega;
        case 2: return d.ln_ahat;
        default: throw malformed_input_error("decomposition component must be 0, 1 or 2");
    }
}

double axis_value(const ModelParams& p, Axis axis) {
    switch (axis) {
        case Axis::phi: return p.phi;
        case Axis::nu: return p.nu;
        case Axis::mu: return p.mu;
        case Axis::kappa: return p.kappa;
    }
    return 0.0;
}

double eval_component(const ModelParams& base, Axis axis, double value, int component) {
    return component_of(decompose(with_axis(base, axis, value)), component);
}

}  // namespace

double elasticity_fd(const ModelParams& p, Axis axis, int component, double rel_step) {
    const double x0 = axis_value(p, axis);
    const double h = rel_step;  // step in ln x
    const double up = eval_component(p, axis, x0 * std::exp(h), component);
    const double dn = eval_component(p, axis, x0 * std::exp(-h), component);
    return (up - dn) / (2.0 * h);
}

double elasticity_fd5(const ModelParams& p, Axis axis, int component, double rel_step) {
    const double x0 = axis_value(p, axis);
    const double h = rel_step;
    const double f2u = eval_component(p, axis, x0 * std::exp(2.0 * h), component);
    const double f1u = eval_component(p, axis, x0 * std::exp(h), component);
    const double f1d = eval_component(p, axis, x0 * std::exp(-h), component);
    const double f2d = eval_component(p, axis, x0 * std::exp(-2.0 * h), component);
    return (-f2u + 8.0 * f1u - 8.0 * f1d + f2d) / (12.0 * h);
}

FdCheck fd_check(const ModelParams& p, Axis axis, double rel_step) {
    double analytic;
    switch (axis) {
        case Axis::phi: analytic = dln_tfp_dln_phi(p).total; break;
        case Axis::kappa: analytic = dln_dkappa(p).technical; break;  // TFP moves only via Ahat
        default:
            throw malformed_input_error(
                "fd_check: no closed-form elasticity on this axis; use elasticity_fd5");
    }
    double h = rel_step;
    for (int attempt = 0; attempt < 6; ++attempt) {
        const double x0 = axis_value(p, axis);
        const ModelParams up = with_axis(p, axis, x0 * std::exp(h));
        const ModelParams dn = with_axis(p, axis, x0 * std::exp(-h));
        if (validate(up).ok() && validate(dn).ok()) {
            FdCheck c{};
            c.analytic = analytic;
            c.fd = elasticity_fd(p, axis, 0, h);
            c.rel_err = std::abs(c.analytic - c.fd) / std::max(std::abs(c.analytic), 1e-12);
            return c;
        }
        h *= 0.1;
    }
    throw calibration_error("fd_check: perturbed points never entered the validity region");
}

}  // namespace firmscale
