#include "firmscale/steady_state.hpp"

#include <cmath>
#include <vector>

#include "firmscale/numeric.hpp"
#include "firmscale/pareto.hpp"

namespace firmscale {

namespace {

double relative_gap(double lhs, double rhs) {
    const double scale = std::max(std::abs(lhs), std::abs(rhs));
    if (scale == 0.0) return 0.0;
    return (lhs - rhs) / scale;
}

SteadyState assemble_from_capital(double K, const ModelParams& p, const DerivedConstants& d) {
    SteadyState s{};
    s.K = K;
    s.r = d.r_ss;
    s.C = K * (p.mu * d.r_ss / (p.alpha * p.nu) - p.delta);
    s.abar = d.psi * std::pow(K, p.alpha * p.nu / (p.theta - 1.0));
    s.ahat = d.gamma * s.abar;
    s.tfp = d.omega * s.ahat;
    s.Y = s.tfp * std::pow(K, p.alpha * p.nu);
    s.w = p.kappa / p.phi * (p.theta_mu_nu() - 1.0) * std::pow(s.abar, p.theta);
    s.J = 1.0 - std::pow(s.abar, -p.theta);
    s.N = d.n_firms;
    s.E = s.N / (1.0 - s.J);
    s.I = p.delta * K;
    s.T = s.E * p.kappa;
    s.Pi = 0.0;
    s.u = d.u;
    s.s_l = d.s_l;
    s.omega = d.omega;
    return s;
}

}  // namespace

SteadyState solve_closed_form(const ModelParams& p) {
    const ValidationReport report = validate(p);
    if (!report.ok()) {
        // an entry cost above its bound gets the actionable error; anything
        // else is an ordinary assumption failure
        const bool only_kappa = report.violations.size() == 1 &&
                                report.violations[0].assumption.rfind("entry-cost", 0) == 0;
        if (only_kappa) {
            const double bound = kappa_max(p);
            throw infeasible_entry_cost_error(
                "entry cost implies a cutoff below the minimum technology draw; "
                "kappa = " + format_full(p.kappa) + " must not exceed kappa_max = " +
                    format_full(bound),
                bound);
        }
        require_valid(p);  // throws assumption_error with the full report
    }
    const DerivedConstants d = derived_constants(p);
    const double exponent = (p.theta - 1.0) / (p.theta_one_alpha_nu() - 1.0);
    const double K = std::pow(p.alpha * p.nu * d.omega * d.gamma * d.psi / (p.mu * d.r_ss), exponent);
    SteadyState s = assemble_from_capital(K, p, d);
    if (s.abar < 1.0 - 1e-9) {
        const double bound = kappa_max(p);
        throw infeasible_entry_cost_error(
            "entry cost implies a cutoff below the minimum technology draw: abar = " +
                format_full(s.abar) + "; kappa must not exceed kappa_max = " + format_full(bound),
            bound);
    }
    return s;
}

double abar_direct_closed_form(const ModelParams& p) {
    require_valid(p);
    const double r = 1.0 / p.beta - (1.0 - p.delta);
    const double x = p.theta_mu_nu();
    const double bracket = std::pow(p.nu, p.nu) / p.mu * std::pow(p.alpha / r, p.alpha * p.nu) *
                           std::pow(p.phi * (1.0 - p.alpha), p.nu * (1.0 - p.alpha)) *
                           std::pow(p.theta, p.mu - 1.0) * std::pow(p.mu - p.nu, p.mu - p.nu) /
                           std::pow(p.kappa, 1.0 - p.alpha * p.nu) /
                           std::pow(x - 1.0, p.mu - p.alpha * p.nu);
    return std::pow(bracket, 1.0 / (p.theta_one_alpha_nu() - 1.0));
}

std::array<double, 7> residuals(const SteadyState& s, const ModelParams& p) {
    const DerivedConstants d = derived_constants(p);
    std::array<double, 7> out{};
    out[0] = relative_gap(s.Y, s.C + p.delta * s.K);
    out[1] = p.beta * (s.r + 1.0 - p.delta) - 1.0;
    out[2] = relative_gap(s.Y, s.tfp * std::pow(s.K, p.alpha * p.nu));
    out[3] = relative_gap(s.r, p.alpha * p.nu / p.mu * s.Y / s.K);
    out[4] = relative_gap(s.w, (1.0 - p.alpha) * p.nu / p.mu * s.Y / d.u);
    out[5] = relative_gap(s.w, p.kappa / p.phi * (p.theta_mu_nu() - 1.0) * std::pow(s.abar, p.theta));
    out[6] = relative_gap(s.tfp, d.omega * d.gamma * s.abar);
    return out;
}

const std::array<std::string, 7>& residual_names() {
    static const std::array<std::string, 7> names = {
        "resource constraint", "euler (steady form)",   "production function",
        "rental rate",         "factor-market wage",    "free-entry wage",
        "tfp identity"};
    return names;
}

namespace {

double max_abs(const std::array<double, 7>& v) {
    double m = 0.0;
    for (double x : v) m = std::max(m, std::abs(x));
    return m;
}

SteadyState state_from_vector(const std::array<double, 7>& x, const DerivedConstants& d) {
    SteadyState s{};
    s.K = x[0];
    s.C = x[1];
    s.Y = x[2];
    s.r = x[3];
    s.w = x[4];
    s.abar = x[5];
    s.tfp = x[6];
    s.u = d.u;
    s.s_l = d.s_l;
    s.N = d.n_firms;
    s.omega = d.omega;
    return s;
}

void finalise_derived(SteadyState& s, const ModelParams& p) {
    s.I = p.delta * s.K;
    s.ahat = s.abar * gamma_closed_form(p);
    s.J = 1.0 - std::pow(s.abar, -p.theta);
    s.E = s.N / (1.0 - s.J);
    s.T = s.E * p.kappa;
    s.Pi = 0.0;
}

}  // namespace

SteadyState solve_numeric(const ModelParams& p, const SteadyState* guess,
                          const NumericSolveOptions& opt, NumericSolveStats* stats) {
    require_valid(p);
    const DerivedConstants d = derived_constants(p);

    std::array<double, 7> x{};
    if (guess != nullptr) {
        x = {guess->K, guess->C, guess->Y, guess->r, guess->w, guess->abar, guess->tfp};
    } else {
        // assumption-free start: closed-form K with Gamma and Psi replaced by 1
        const double exponent = (p.theta - 1.0) / (p.theta_one_alpha_nu() - 1.0);
        const double k0 = std::pow(p.alpha * p.nu * d.omega / (p.mu * d.r_ss), exponent);
        const double r0 = d.r_ss;
        const double y0 = p.mu * r0 * k0 / (p.alpha * p.nu);
        const double c0 = y0 - p.delta * k0;
        const double w0 = (1.0 - p.alpha) * p.nu / p.mu * y0 / d.u;
        const double abar0 =
            std::pow(w0 * p.phi / (p.kappa * (p.theta_mu_nu() - 1.0)), 1.0 / p.theta);
        const double tfp0 = y0 / std::pow(k0, p.alpha * p.nu);
        x = {k0, c0, y0, r0, w0, abar0, tfp0};
    }

    auto eval = [&](const std::array<double, 7>& v) {
        SteadyState s = state_from_vector(v, d);
        return residuals(s, p);
    };

    std::array<double, 7> res = eval(x);
    double norm = max_abs(res);
    int iter = 0;
    for (; iter < opt.max_iter && norm > opt.tol; ++iter) {
        // forward-difference Jacobian of the 7 residuals
        std::vector<double> jac(49);
        for (int col = 0; col < 7; ++col) {
            std::array<double, 7> xh = x;
            const double h = std::max(std::abs(x[col]), 1e-8) * 1e-7;
            xh[col] += h;
            const auto rh = eval(xh);
            for (int row = 0; row < 7; ++row) jac[row * 7 + col] = (rh[row] - res[row]) / h;
        }
        std::vector<double> rhs(res.begin(), res.end());
        solve_dense(jac, rhs, 7);

        double step = 1.0;
        bool accepted = false;
        for (int halving = 0; halving <= opt.max_halvings; ++halving) {
            std::array<double, 7> trial = x;
            bool positive = true;
            for (int i = 0; i < 7; ++i) {
                trial[i] -= step * rhs[i];
                if (!(trial[i] > 0.0)) positive = false;
            }
            if (positive) {
                const auto trial_res = eval(trial);
                const double trial_norm = max_abs(trial_res);
                if (trial_norm < norm) {
                    x = trial;
                    res = trial_res;
                    norm = trial_norm;
                    accepted = true;
                    break;
                }
            }
            step *= 0.5;
        }
        if (!accepted)
            throw solver_error("steady-state Newton stalled; residual norm " + format_full(norm),
                               norm, iter);
    }
    if (norm > opt.tol)
        throw solver_error("steady-state Newton did not converge; residual norm " +
                               format_full(norm),
                           norm, iter);
    if (stats) *stats = NumericSolveStats{iter, norm};

    SteadyState s = state_from_vector(x, d);
    finalise_derived(s, p);
    return s;
}

std::string steady_state_csv_header() {
    return "K,C,Y,I,r,w,abar,ahat,J,E,N,tfp,omega,u,s_l,T,Pi";
}

std::string steady_state_csv_row(const SteadyState& s) {
    const double cols[17] = {s.K, s.C, s.Y,   s.I,     s.r, s.w,   s.abar, s.ahat, s.J,
                             s.E, s.N, s.tfp, s.omega, s.u, s.s_l, s.T,    s.Pi};
    std::string out;
    for (int i = 0; i < 17; ++i) {
        if (i) out += ',';
        out += format_full(cols[i]);
    }
    return out;
}

}  // namespace firmscale
