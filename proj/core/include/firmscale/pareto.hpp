#pragma once

#include <cstdint>
#include <vector>

#include "firmscale/params.hpp"

namespace firmscale {

/// One technology draw: the uniform variate and the implied level.
struct TechDraw {
    double j;     ///< uniform draw in [0,1)
    double a;     ///< technology level, >= 1
    bool active;  ///< a >= cutoff when sampled against one
};

/// Technology level for a uniform draw: (1-j)^(-1/theta), scale fixed at 1.
/// Strictly increasing in j; j >= 1 is a domain error (unbounded technology).
double pareto_quantile(double j, double theta);

/// CDF of the technology level, inverse of the quantile: 1 - a^(-theta).
double pareto_cdf(double a, double theta);

/// Unconditional mean of scaled technology A^(1/(mu-nu)), raised to mu-nu.
/// Requires theta*(mu-nu) > 1; otherwise throws divergent_moment_error.
double gamma_closed_form(const ModelParams& p);

/// Power mean of technology conditional on j > cutoff_j, closed form:
/// Gamma * (1 - cutoff_j)^(-1/theta).
double power_mean_closed(double cutoff_j, const ModelParams& p);

/// Same quantity by adaptive quadrature of the defining integral. Serves as
/// the independent oracle for the closed form; abs tolerance 1e-12 on the
/// transformed integrand.
double power_mean_quadrature(double cutoff_j, const ModelParams& p);

/// Deterministic technology panel: n draws addressed by (seed, index), with
/// the activity flag a >= abar_cutoff. Identical output for any `jobs`
/// because draw i depends only on (seed, i).
std::vector<TechDraw> sample_panel(std::size_t n, std::uint64_t seed, const ModelParams& p,
                                   double abar_cutoff, int jobs = 1);

/// Empirical power mean over the active draws of a panel: the sample mean of
/// a^(1/(mu-nu)) over active draws, raised to mu-nu. Converges to the power
/// mean at the panel's cutoff.
double empirical_power_mean(const std::vector<TechDraw>& panel, const ModelParams& p);

}  // namespace firmscale
