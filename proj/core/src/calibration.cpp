#include "firmscale/calibration.hpp"

#include <cmath>
#include <limits>

#include "firmscale/numeric.hpp"

namespace firmscale {

double beta_from_real_rate(double real_rate) {
    if (!(real_rate > 0.0))
        throw calibration_error("real rate must be positive, got " + format_full(real_rate));
    const double beta = 1.0 / (1.0 + real_rate);
    if (!(beta > 0.0 && beta < 1.0))
        throw calibration_error("implied discount factor leaves (0,1): " + format_full(beta));
    return beta;
}

double rental_rate_from_beta(double beta, double delta) {
    if (!(beta > 0.0 && beta < 1.0))
        throw calibration_error("beta must lie in (0,1), got " + format_full(beta));
    return 1.0 / beta - (1.0 - delta);
}

double phi_n_over_l(double theta, double alpha, double nu, double mu) {
    return (theta * (mu - nu) - 1.0) / (theta * (mu - alpha * nu) - 1.0);
}

ThetaCalibration theta_from_nl(double n_over_l, double phi, double alpha, double nu, double mu) {
    const double x = phi * n_over_l;
    if (!(x > 0.0 && x < 1.0))
        throw calibration_error("phi * N/L must lie in (0,1), got " + format_full(x));
    const double denom = (mu - nu) - x * (mu - alpha * nu);
    if (!(denom > 0.0))
        throw calibration_error(
            "no positive Pareto shape matches phi*N/L = " + format_full(x) +
            ": past the pole at (mu-nu)/(mu-alpha*nu) = " + format_full((mu - nu) / (mu - alpha * nu)));
    ThetaCalibration out{};
    out.theta = (1.0 - x) / denom;
    const bool a2_scaled = out.theta * (mu - nu) > 1.0;
    const bool a2_concave = out.theta * (1.0 - alpha * nu) > 1.0;
    out.satisfies_assumptions = a2_scaled && a2_concave && out.theta > 1.0;
    if (!out.satisfies_assumptions)
        out.note = "inverted theta = " + format_full(out.theta) + " violates the shape assumptions";
    else if (denom < 0.05 * (mu - nu))
        out.note = "near the inversion pole; theta is poorly identified";
    return out;
}

double phi_from_inactive_share(double target_j, const ModelParams& base) {
    if (!(target_j >= 0.0 && target_j < 1.0))
        throw calibration_error("target inactive share must lie in [0,1)");

    // J(phi) = 1 - (kappa_max(phi)/kappa)^(-theta(1-alpha nu)/D) extended
    // continuously below zero for kappa > kappa_max(phi); the extension is
    // monotone in phi, so the bracketed solve is well posed even when the
    // lower bracket endpoint is infeasible.
    auto j_of_phi = [&](double phi) {
        ModelParams p = base;
        p.phi = phi;
        const double lk = std::log(kappa_max(p) / p.kappa);
        const double e = (1.0 - p.alpha * p.nu) / (p.theta_one_alpha_nu() - 1.0);
        return 1.0 - std::exp(-p.theta * e * lk);
    };

    const double lo = 1e-4, hi = 1e3;
    const double f_lo = j_of_phi(lo) - target_j;
    const double f_hi = j_of_phi(hi) - target_j;
    if (f_lo == 0.0) return lo;
    if (f_hi == 0.0) return hi;
    if ((f_lo > 0.0) == (f_hi > 0.0))
        throw calibration_error("no overhead cost in [1e-4, 1e3] attains inactive share " +
                                format_full(target_j));
    double phi = brent_root([&](double v) { return j_of_phi(v) - target_j; }, lo, hi, 1e-14,
                            1e-10);

    // the zero-share target sits exactly on the entry-cost bound; the root can
    // land an ulp on the infeasible side, so walk it back inside
    ModelParams solved = base;
    for (int nudge = 0; nudge < 64; ++nudge) {
        solved.phi = phi;
        if (validate(solved).ok()) break;
        phi *= 1.0 + 1e-12;
    }
    const SteadyState ss = solve_closed_form(solved);
    if (std::abs(ss.J - target_j) > 1e-8)
        throw calibration_error("phi solve did not reach the inactive-share target: J = " +
                                format_full(ss.J));
    return phi;
}

OverheadRatio kappa_to_overhead_ratio(const SteadyState& ss, const ModelParams& p) {
    OverheadRatio out{};
    out.ratio = p.kappa / (p.phi * ss.w);
    out.flag_geq_one = out.ratio >= 1.0;
    return out;
}

std::vector<ThetaSeriesRow> calibrate_theta_series(const std::vector<SeriesRow>& series, double phi,
                                                   double alpha) {
    std::vector<ThetaSeriesRow> out;
    out.reserve(series.size());
    for (const auto& row : series) {
        if (!row.nu || !row.mu || !row.n_over_l)
            throw calibration_error("theta back-out needs nu, mu and n_over_l for year " +
                                    std::to_string(row.year));
        ThetaSeriesRow r{};
        r.year = row.year;
        r.nu = *row.nu;
        r.mu = *row.mu;
        r.n_over_l = *row.n_over_l;
        try {
            const ThetaCalibration cal = theta_from_nl(r.n_over_l, phi, alpha, r.nu, r.mu);
            r.theta = cal.theta;
            r.valid = cal.satisfies_assumptions;
            r.note = cal.note;
        } catch (const calibration_error& e) {
            r.theta = std::numeric_limits<double>::quiet_NaN();
            r.valid = false;
            r.note = e.what();
        }
        out.push_back(r);
    }
    return out;
}

std::string theta_series_csv_header() { return "year,nu,mu,n_over_l,theta,valid"; }

std::string theta_series_csv_row(const ThetaSeriesRow& row) {
    std::string out = std::to_string(row.year);
    const double cols[4] = {row.nu, row.mu, row.n_over_l, row.theta};
    for (double c : cols) {
        out += ',';
        out += format_full(c);
    }
    out += ',';
    out += row.valid ? "1" : "0";
    return out;
}

}  // namespace firmscale
