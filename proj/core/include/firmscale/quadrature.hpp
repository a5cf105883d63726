#pragma once

#include <cmath>
#include <cstddef>
#include <limits>

#include "firmscale/errors.hpp"

namespace firmscale {

struct QuadratureResult {
    double value;
    double error_estimate;
    int subdivisions;
};

namespace detail {

// Gauss-Kronrod 15(7) nodes and weights on [-1, 1].
inline constexpr double kKronrodNodes[8] = {
    0.991455371120812639206854697526329,
    0.949107912342758524526189684047851,
    0.864864423359769072789712788640926,
    0.741531185599394439863864773280788,
    0.586087235467691130294144838258730,
    0.405845151377397166906606412076961,
    0.207784955007898467600689403773245,
    0.000000000000000000000000000000000};

inline constexpr double kKronrodWeights[8] = {
    0.022935322010529224963732008058970,
    0.063092092629978553290700663189204,
    0.104790010322250183839876322541518,
    0.140653259715525918745189590510238,
    0.169004726639267902826583426598550,
    0.190350578064785409913256402421014,
    0.204432940075298892414161999234649,
    0.209482141084727828012999174891714};

inline constexpr double kGaussWeights[4] = {
    0.129484966168869693270611432679082,
    0.279705391489276667901467771423780,
    0.381830050505118944950369775488975,
    0.417959183673469387755102040816327};

template <class F>
void gauss_kronrod_15(const F& f, double a, double b, double& kronrod, double& err) {
    const double mid = 0.5 * (a + b);
    const double half = 0.5 * (b - a);
    const double f_mid = f(mid);
    double gauss = kGaussWeights[3] * f_mid;
    kronrod = kKronrodWeights[7] * f_mid;
    for (int i = 0; i < 7; ++i) {
        const double dx = half * kKronrodNodes[i];
        const double fsum = f(mid - dx) + f(mid + dx);
        kronrod += kKronrodWeights[i] * fsum;
        if (i % 2 == 1) gauss += kGaussWeights[i / 2] * fsum;
    }
    kronrod *= half;
    gauss *= half;
    err = std::abs(kronrod - gauss);
}

template <class F>
void adapt(const F& f, double a, double b, double tol, int depth, int max_depth,
           double& total, double& total_err, int& panels) {
    double value, err;
    gauss_kronrod_15(f, a, b, value, err);
    if (err <= tol || depth >= max_depth) {
        total += value;
        total_err += err;
        ++panels;
        return;
    }
    const double mid = 0.5 * (a + b);
    adapt(f, a, mid, 0.5 * tol, depth + 1, max_depth, total, total_err, panels);
    adapt(f, mid, b, 0.5 * tol, depth + 1, max_depth, total, total_err, panels);
}

}  // namespace detail

/// Adaptive Gauss-Kronrod 15(7) on [a, b] with an absolute tolerance.
template <class F>
QuadratureResult integrate(const F& f, double a, double b, double abs_tol = 1e-12,
                           int max_depth = 48) {
    QuadratureResult r{0.0, 0.0, 0};
    if (a == b) return r;
    detail::adapt(f, a, b, abs_tol, 0, max_depth, r.value, r.error_estimate, r.subdivisions);
    return r;
}

/// Integrates f over j in (j_lo, 1) where f behaves like (1-j)^(-p) with
/// p in (0,1) at the upper endpoint. The substitution t = (1-j)^(1-p) maps
/// the singular endpoint to t = 0 and cancels the singularity:
///   int_{j_lo}^{1} f(j) dj = (1/(1-p)) int_0^{(1-j_lo)^(1-p)} f(j(t)) (1-j(t))^p dt.
/// The integrand receives (j, 1-j) so callers can form powers of 1-j without
/// cancellation near the endpoint.
template <class F>
QuadratureResult integrate_with_endpoint_power(const F& f, double j_lo, double p,
                                               double abs_tol = 1e-12) {
    if (!(p > 0.0 && p < 1.0))
        throw model_error("integrate_with_endpoint_power: exponent p must lie in (0,1)");
    const double q = 1.0 - p;
    const double upper = std::pow(1.0 - j_lo, q);
    auto g = [&](double t) {
        double one_minus_j = std::pow(t, 1.0 / q);
        // floor away from 0 so f's own (1-j)^(-p) factor cannot produce inf*0
        if (one_minus_j < std::numeric_limits<double>::min())
            one_minus_j = std::numeric_limits<double>::min();
        const double j = 1.0 - one_minus_j;
        return f(j, one_minus_j) * std::pow(one_minus_j, p) / q;
    };
    return integrate(g, 0.0, upper, abs_tol);
}

}  // namespace firmscale
