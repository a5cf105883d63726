#include "firmscale/transition.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "firmscale/numeric.hpp"

namespace firmscale {

namespace {

// Reduced-model constants: output = scale * K^kexp, rental = rcoef * K^(kexp-1).
struct ReducedModel {
    double scale;  ///< Omega * Gamma * Psi
    double kexp;   ///< alpha nu theta / (theta - 1)
    double rcoef;
    double psi;
    double abar_exp;  ///< alpha nu / (theta - 1)

    double output(double K) const { return scale * std::pow(K, kexp); }
    double rental(double K) const { return rcoef * std::pow(K, kexp - 1.0); }
    double rental_deriv(double K) const { return rcoef * (kexp - 1.0) * std::pow(K, kexp - 2.0); }
};

ReducedModel reduced_model(const ModelParams& p, const DerivedConstants& d) {
    ReducedModel m{};
    m.scale = d.omega * d.gamma * d.psi;
    m.kexp = p.alpha * p.nu * p.theta / (p.theta - 1.0);
    m.rcoef = p.alpha * p.nu / p.mu * m.scale;
    m.psi = d.psi;
    m.abar_exp = p.alpha * p.nu / (p.theta - 1.0);
    return m;
}

}  // namespace

PeriodBlock per_period_block(double K, const ModelParams& p) {
    if (!(K > 0.0)) throw malformed_input_error("per_period_block: capital must be positive");
    const DerivedConstants d = derived_constants(p);
    const ReducedModel m = reduced_model(p, d);
    PeriodBlock b{};
    b.abar = d.psi * std::pow(K, m.abar_exp);
    b.tfp = d.omega * d.gamma * b.abar;
    b.Y = m.output(K);
    b.r = m.rental(K);
    b.w = p.kappa / p.phi * (p.theta_mu_nu() - 1.0) * std::pow(b.abar, p.theta);
    b.J = 1.0 - std::pow(b.abar, -p.theta);
    b.N = d.n_firms;
    b.u = d.u;
    return b;
}

double dlnr_dlnk(const ModelParams& p) {
    return (1.0 - p.theta_one_alpha_nu()) / (p.theta - 1.0);
}

double TransitionPath::max_euler_residual() const {
    double m = 0.0;
    for (double v : euler_residuals) m = std::max(m, std::abs(v));
    return m;
}

double TransitionPath::max_resource_residual() const {
    double m = 0.0;
    for (double v : resource_residuals) m = std::max(m, std::abs(v));
    return m;
}

namespace {

struct BvpWork {
    std::vector<double> x;  // interleaved [C_0, K_1, C_1, ..., K_T, C_T]
    int T;
    double k0;
    double k_end;  // pinned K_{T+1}
};

double k_at(const BvpWork& w, int t) {
    if (t == 0) return w.k0;
    if (t == w.T + 1) return w.k_end;
    return w.x[2 * t - 1];
}

double c_at(const BvpWork& w, int t) { return w.x[2 * t]; }

// Raw residual vector, row 2t = resource at t, row 2t+1 = euler at t.
void residual_vector(const BvpWork& w, const ModelParams& p, const ReducedModel& m,
                     std::vector<double>& out, double* max_rel) {
    const int T = w.T;
    out.resize(2 * T + 1);
    double worst = 0.0;
    for (int t = 0; t <= T; ++t) {
        const double kt = k_at(w, t);
        const double resources = m.output(kt) + (1.0 - p.delta) * kt;
        const double rc = resources - c_at(w, t) - k_at(w, t + 1);
        out[2 * t] = rc;
        worst = std::max(worst, std::abs(rc) / resources);
        if (t < T) {
            const double growth = std::pow(c_at(w, t) / c_at(w, t + 1), p.sigma);
            const double ee = p.beta * (m.rental(k_at(w, t + 1)) + 1.0 - p.delta) * growth - 1.0;
            out[2 * t + 1] = ee;
            worst = std::max(worst, std::abs(ee));
        }
    }
    if (max_rel) *max_rel = worst;
}

void analytic_jacobian(const BvpWork& w, const ModelParams& p, const ReducedModel& m,
                       std::vector<double>& lower, std::vector<double>& diag,
                       std::vector<double>& upper) {
    const int T = w.T;
    const std::size_t n = 2 * T + 1;
    lower.assign(n, 0.0);
    diag.assign(n, 0.0);
    upper.assign(n, 0.0);
    for (int t = 0; t <= T; ++t) {
        const std::size_t row = 2 * t;
        if (t >= 1) {
            const double kt = k_at(w, t);
            lower[row] = m.scale * m.kexp * std::pow(kt, m.kexp - 1.0) + (1.0 - p.delta);
        }
        diag[row] = -1.0;          // d rc_t / d C_t
        if (t <= T - 1) upper[row] = -1.0;  // d rc_t / d K_{t+1}
        if (t < T) {
            const std::size_t erow = 2 * t + 1;
            const double knext = k_at(w, t + 1);
            const double growth = std::pow(c_at(w, t) / c_at(w, t + 1), p.sigma);
            const double gross = p.beta * (m.rental(knext) + 1.0 - p.delta) * growth;
            lower[erow] = gross * p.sigma / c_at(w, t);
            diag[erow] = p.beta * m.rental_deriv(knext) * growth;
            upper[erow] = -gross * p.sigma / c_at(w, t + 1);
        }
    }
}

// Finite-difference fallback exploiting the same sparsity: each residual row
// touches at most its three neighbouring unknowns.
void fd_jacobian(const BvpWork& w, const ModelParams& p, const ReducedModel& m,
                 std::vector<double>& lower, std::vector<double>& diag,
                 std::vector<double>& upper) {
    const int T = w.T;
    const std::size_t n = 2 * T + 1;
    lower.assign(n, 0.0);
    diag.assign(n, 0.0);
    upper.assign(n, 0.0);
    std::vector<double> base;
    residual_vector(w, p, m, base, nullptr);
    BvpWork pert = w;
    for (std::size_t col = 0; col < n; ++col) {
        const double h = std::max(std::abs(w.x[col]), 1e-8) * 1e-7;
        pert.x[col] = w.x[col] + h;
        std::vector<double> shifted;
        residual_vector(pert, p, m, shifted, nullptr);
        pert.x[col] = w.x[col];
        if (col >= 1) lower[col] = (shifted[col - 1] - base[col - 1]) / h;
        diag[col] = (shifted[col] - base[col]) / h;
        if (col + 1 < n) upper[col] = (shifted[col + 1] - base[col + 1]) / h;
    }
    // rows store the triple (lower, diag, upper) per row, not per column:
    // transpose the column-wise differences into row-wise bands
    std::vector<double> rl(n, 0.0), rd(n, 0.0), ru(n, 0.0);
    for (std::size_t col = 0; col < n; ++col) {
        if (col >= 1) ru[col - 1] = lower[col];
        rd[col] = diag[col];
        if (col + 1 < n) rl[col + 1] = upper[col];
    }
    lower = std::move(rl);
    diag = std::move(rd);
    upper = std::move(ru);
}

TransitionPath build_path(const BvpWork& w, const ModelParams& p, const ReducedModel& m) {
    TransitionPath path;
    path.horizon = w.T;
    path.k.resize(w.T + 1);
    path.c.resize(w.T + 1);
    for (int t = 0; t <= w.T; ++t) {
        path.k[t] = k_at(w, t);
        path.c[t] = c_at(w, t);
    }
    path.blocks.reserve(w.T + 1);
    for (int t = 0; t <= w.T; ++t) path.blocks.push_back(per_period_block(path.k[t], p));
    path.euler_residuals.resize(w.T);
    path.resource_residuals.resize(w.T);
    for (int t = 0; t < w.T; ++t) {
        const double resources = m.output(path.k[t]) + (1.0 - p.delta) * path.k[t];
        path.resource_residuals[t] =
            (resources - path.c[t] - path.k[t + 1]) / resources;
        path.euler_residuals[t] =
            p.beta * (m.rental(path.k[t + 1]) + 1.0 - p.delta) *
                std::pow(path.c[t] / path.c[t + 1], p.sigma) -
            1.0;
    }
    return path;
}

TransitionPath solve_bvp_once(const ModelParams& p, double k0, int T, const TransitionOptions& opt,
                              const SteadyState& ss, const DerivedConstants& d) {
    const ReducedModel m = reduced_model(p, d);

    BvpWork w;
    w.T = T;
    w.k0 = k0;
    w.k_end = ss.K;
    w.x.resize(2 * T + 1);

    // geometric capital guess toward the steady state; consumption from the
    // resource constraint, floored away from zero
    const double rho = 0.9;
    auto k_guess = [&](int t) { return ss.K + (k0 - ss.K) * std::pow(rho, t); };
    for (int t = 1; t <= T; ++t) w.x[2 * t - 1] = k_guess(t);
    for (int t = 0; t <= T; ++t) {
        const double kt = (t == 0) ? k0 : w.x[2 * t - 1];
        const double knext = (t == T) ? ss.K : k_guess(t + 1);
        const double c = m.output(kt) + (1.0 - p.delta) * kt - knext;
        w.x[2 * t] = std::max(c, 0.1 * ss.C);
    }

    std::vector<double> res;
    double norm;
    residual_vector(w, p, m, res, &norm);

    int iter = 0;
    for (; iter < opt.max_iter && norm > opt.tol; ++iter) {
        std::vector<double> lower, diag, upper;
        if (opt.analytic_jacobian)
            analytic_jacobian(w, p, m, lower, diag, upper);
        else
            fd_jacobian(w, p, m, lower, diag, upper);
        std::vector<double> step = res;
        solve_tridiagonal(std::move(lower), std::move(diag), std::move(upper), step);

        double lambda = 1.0;
        bool accepted = false;
        for (int halving = 0; halving <= opt.max_halvings; ++halving) {
            BvpWork trial = w;
            bool positive = true;
            for (std::size_t i = 0; i < w.x.size(); ++i) {
                trial.x[i] = w.x[i] - lambda * step[i];
                if (!(trial.x[i] > 0.0)) positive = false;
            }
            if (positive) {
                std::vector<double> trial_res;
                double trial_norm;
                residual_vector(trial, p, m, trial_res, &trial_norm);
                if (trial_norm < norm) {
                    w = std::move(trial);
                    res = std::move(trial_res);
                    norm = trial_norm;
                    accepted = true;
                    break;
                }
            }
            lambda *= 0.5;
        }
        if (!accepted)
            throw solver_error("transition Newton stalled; residual norm " + format_full(norm),
                               norm, iter);
    }
    if (norm > opt.tol)
        throw solver_error("transition Newton did not converge; residual norm " + format_full(norm),
                           norm, iter);
    return build_path(w, p, m);
}

}  // namespace

TransitionPath solve_transition(const ModelParams& p, double k0, int horizon,
                                const TransitionOptions& opt) {
    if (!(k0 > 0.0)) throw malformed_input_error("solve_transition: initial capital must be positive");
    if (horizon < 2) throw malformed_input_error("solve_transition: horizon must be at least 2");
    const SteadyState ss = solve_closed_form(p);
    const DerivedConstants d = derived_constants(p);

    int T = horizon;
    double gap = 0.0;
    for (int attempt = 0; attempt <= opt.max_doublings; ++attempt) {
        TransitionPath path = solve_bvp_once(p, k0, T, opt, ss, d);
        gap = std::abs(path.k[T] - ss.K) / ss.K;
        if (gap <= opt.terminal_gap_factor * opt.tol) return path;
        T *= 2;
    }
    throw horizon_too_short_error(
        "transition horizon too short even after doubling: terminal capital gap " +
            format_full(gap),
        gap);
}

int classify_shooting(const ModelParams& p, double k0, double c0, int periods) {
    const SteadyState ss = solve_closed_form(p);
    const DerivedConstants d = derived_constants(p);
    const ReducedModel m = reduced_model(p, d);
    const bool from_below = k0 < ss.K;
    double k = k0, c = c0;
    for (int t = 0; t < periods; ++t) {
        const double knext = m.output(k) + (1.0 - p.delta) * k - c;
        if (from_below) {
            if (knext > ss.K) return +1;   // consumption too low, capital overshoots
            if (!(knext > 0.0) || c > ss.C) return -1;  // too high, path collapses
        } else {
            if (knext < ss.K) return -1;
            if (c < ss.C) return +1;
        }
        c *= std::pow(p.beta * (m.rental(knext) + 1.0 - p.delta), 1.0 / p.sigma);
        k = knext;
    }
    return 0;
}

ShootingResult solve_by_shooting(const ModelParams& p, double k0, int horizon,
                                 double clamp_rel_gap) {
    if (!(k0 > 0.0)) throw malformed_input_error("solve_by_shooting: initial capital must be positive");
    const SteadyState ss = solve_closed_form(p);
    const DerivedConstants d = derived_constants(p);
    const ReducedModel m = reduced_model(p, d);

    const int sim_periods = std::max(4 * horizon, 2000);

    ShootingResult result;
    if (std::abs(k0 - ss.K) / ss.K < 1e-14) {
        result.c0 = ss.C;
        result.settled_at = 0;
    } else {
        double lo = 1e-6 * ss.C;
        double hi = m.output(k0) + (1.0 - p.delta) * k0 - 1e-12 * ss.K;
        if (classify_shooting(p, k0, lo, sim_periods) != +1 ||
            classify_shooting(p, k0, hi, sim_periods) != -1)
            throw solver_error("shooting: initial consumption bracket failed to classify", 0.0, 0);
        for (int iter = 0; iter < 300 && (hi - lo) > 1e-16 * ss.C; ++iter) {
            const double mid = 0.5 * (lo + hi);
            const int cls = classify_shooting(p, k0, mid, sim_periods);
            if (cls == +1)
                lo = mid;
            else if (cls == -1)
                hi = mid;
            else
                break;  // stayed on the saddle for the whole simulation
        }
        result.c0 = 0.5 * (lo + hi);
        result.settled_at = -1;
    }

    // simulate the bisected path; record until it settles inside the clamp
    // band, then hold the steady state
    std::vector<double> k{k0}, c{result.c0};
    int best_t = 0;
    double best_gap = std::max(std::abs(k0 - ss.K) / ss.K, std::abs(result.c0 - ss.C) / ss.C);
    int settled = -1;
    for (int t = 0; t < sim_periods && settled < 0; ++t) {
        const double gap =
            std::max(std::abs(k.back() - ss.K) / ss.K, std::abs(c.back() - ss.C) / ss.C);
        if (gap < clamp_rel_gap) {
            settled = t;
            break;
        }
        if (gap < best_gap) {
            best_gap = gap;
            best_t = t;
        }
        const double knext = m.output(k.back()) + (1.0 - p.delta) * k.back() - c.back();
        if (!(knext > 0.0)) break;
        const double cnext =
            c.back() * std::pow(p.beta * (m.rental(knext) + 1.0 - p.delta), 1.0 / p.sigma);
        k.push_back(knext);
        c.push_back(cnext);
        if ((k0 < ss.K && (knext > ss.K || cnext > ss.C)) ||
            (k0 > ss.K && (knext < ss.K || cnext < ss.C)))
            break;  // left the saddle; clamp from the closest recorded point
    }
    if (settled < 0) settled = best_t;
    result.settled_at = settled;

    TransitionPath path;
    path.horizon = horizon;
    path.k.resize(horizon + 1);
    path.c.resize(horizon + 1);
    for (int t = 0; t <= horizon; ++t) {
        if (t < settled && t < static_cast<int>(k.size())) {
            path.k[t] = k[t];
            path.c[t] = c[t];
        } else {
            path.k[t] = ss.K;
            path.c[t] = ss.C;
        }
    }
    path.k[0] = k0;
    path.c[0] = result.c0;
    path.blocks.reserve(horizon + 1);
    for (int t = 0; t <= horizon; ++t) path.blocks.push_back(per_period_block(path.k[t], p));
    path.euler_residuals.resize(horizon);
    path.resource_residuals.resize(horizon);
    for (int t = 0; t < horizon; ++t) {
        const double resources = m.output(path.k[t]) + (1.0 - p.delta) * path.k[t];
        path.resource_residuals[t] = (resources - path.c[t] - path.k[t + 1]) / resources;
        path.euler_residuals[t] = p.beta * (m.rental(path.k[t + 1]) + 1.0 - p.delta) *
                                      std::pow(path.c[t] / path.c[t + 1], p.sigma) -
                                  1.0;
    }
    result.path = std::move(path);
    return result;
}

std::string transition_csv_header() {
    return "t,K,C,Y,r,w,abar,tfp,N,J,euler_resid,resource_resid";
}

std::string transition_csv_row(int t, const TransitionPath& path) {
    const PeriodBlock& b = path.blocks[t];
    const bool has_resid = t < path.horizon;
    const double er = has_resid ? path.euler_residuals[t] : std::numeric_limits<double>::quiet_NaN();
    const double rr =
        has_resid ? path.resource_residuals[t] : std::numeric_limits<double>::quiet_NaN();
    std::string out = std::to_string(t);
    const double cols[11] = {path.k[t], path.c[t], b.Y, b.r, b.w, b.abar, b.tfp, b.N, b.J, er, rr};
    for (double c : cols) {
        out += ',';
        out += format_full(c);
    }
    return out;
}

}  // namespace firmscale
