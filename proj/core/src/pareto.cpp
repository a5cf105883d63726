#include "firmscale/pareto.hpp"

#include <cmath>

#include "firmscale/numeric.hpp"
#include "firmscale/quadrature.hpp"
#include "firmscale/rng.hpp"

namespace firmscale {

double pareto_quantile(double j, double theta) {
    if (!(theta > 1.0)) throw malformed_input_error("pareto_quantile: theta must exceed 1");
    if (!(j >= 0.0 && j < 1.0))
        throw malformed_input_error("pareto_quantile: draw must lie in [0,1), got " + format_full(j));
    return std::pow(1.0 - j, -1.0 / theta);
}

double pareto_cdf(double a, double theta) {
    if (!(theta > 1.0)) throw malformed_input_error("pareto_cdf: theta must exceed 1");
    if (!(a >= 1.0))
        throw malformed_input_error("pareto_cdf: technology below scale, got " + format_full(a));
    return 1.0 - std::pow(a, -theta);
}

namespace {

double scaled_shape_or_throw(const ModelParams& p) {
    const double x = p.theta_mu_nu();
    if (!(x > 1.0))
        throw divergent_moment_error("scaled technology has no finite mean: theta*(mu-nu) = " +
                                     format_full(x) + " <= 1");
    return x;
}

}  // namespace

double gamma_closed_form(const ModelParams& p) {
    const double x = scaled_shape_or_throw(p);
    return std::pow(x / (x - 1.0), p.mu - p.nu);
}

double power_mean_closed(double cutoff_j, const ModelParams& p) {
    if (!(cutoff_j >= 0.0 && cutoff_j < 1.0))
        throw malformed_input_error("power_mean: cutoff draw must lie in [0,1)");
    return gamma_closed_form(p) * std::pow(1.0 - cutoff_j, -1.0 / p.theta);
}

double power_mean_quadrature(double cutoff_j, const ModelParams& p) {
    if (!(cutoff_j >= 0.0 && cutoff_j < 1.0))
        throw malformed_input_error("power_mean: cutoff draw must lie in [0,1)");
    const double x = scaled_shape_or_throw(p);
    const double inv_exp = 1.0 / (p.mu - p.nu);  // exponent applied to A(j)
    const double endpoint_power = 1.0 / x;       // A(j)^(1/(mu-nu)) = (1-j)^(-1/x)
    auto scaled_tech = [&](double, double one_minus_j) {
        return std::pow(std::pow(one_minus_j, -1.0 / p.theta), inv_exp);
    };
    const auto integral = integrate_with_endpoint_power(scaled_tech, cutoff_j, endpoint_power, 1e-12);
    const double conditional_mean = integral.value / (1.0 - cutoff_j);
    return std::pow(conditional_mean, p.mu - p.nu);
}

std::vector<TechDraw> sample_panel(std::size_t n, std::uint64_t seed, const ModelParams& p,
                                   double abar_cutoff, int jobs) {
    if (n == 0) throw malformed_input_error("sample_panel: need at least one draw");
    if (!(abar_cutoff >= 1.0))
        throw malformed_input_error("sample_panel: cutoff technology must be >= 1");
    std::vector<TechDraw> panel(n);
    const double theta = p.theta;
    parallel_for(n, jobs, [&](std::size_t i) {
        const double j = uniform01_at(seed, i);
        const double a = std::pow(1.0 - j, -1.0 / theta);
        panel[i] = TechDraw{j, a, a >= abar_cutoff};
    });
    return panel;
}

double empirical_power_mean(const std::vector<TechDraw>& panel, const ModelParams& p) {
    const double inv_exp = 1.0 / (p.mu - p.nu);
    std::vector<double> scaled;
    scaled.reserve(panel.size());
    for (const auto& d : panel)
        if (d.active) scaled.push_back(std::pow(d.a, inv_exp));
    if (scaled.empty()) throw model_error("empirical_power_mean: no active draws");
    const double mean = pairwise_sum(scaled) / static_cast<double>(scaled.size());
    return std::pow(mean, p.mu - p.nu);
}

}  // namespace firmscale
