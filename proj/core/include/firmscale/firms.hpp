#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "firmscale/pareto.hpp"
#include "firmscale/steady_state.hpp"

namespace firmscale {

/// One firm's technology draw and policy outcomes at a steady state.
/// Inactive firms carry zeros, matching v = max{pi, 0} = 0.
struct FirmRecord {
    double j;        ///< uniform draw implied by the technology level
    double a;        ///< technology
    bool active;     ///< a >= threshold
    double k;        ///< capital
    double ell;      ///< production labour
    double ell_tot;  ///< total labour, ell + phi (0 if inactive)
    double y;        ///< output
    double py;       ///< revenue
    double pi;       ///< profit
    double s;        ///< scale economies S
};

/// Policy of a firm with technology `a` at steady state `ss`. All active
/// quantities are pinned off the threshold firm and scaled by relative
/// technology.
FirmRecord firm_policy(double a, const SteadyState& ss, const ModelParams& p);

/// Elasticity of output with respect to total labour, nu(1-alpha)(1+phi/ell).
/// Decreasing in firm size; bounded in (nu(1-alpha), mu - alpha*nu) for
/// optimally chosen labour.
double total_labour_elasticity(double ell, const ModelParams& p);

/// Discrete version of the production-side illustration: raise total labour
/// by `rise` and report the change in production labour.
struct LabourRiseResult {
    double ell_before;
    double ell_after;
    double pct_change;  ///< (after-before)/before
};
LabourRiseResult production_labour_response(double ell_tot, double overhead, double rise = 0.10);

struct CostCurvePoint {
    double y;       ///< output level
    double avc;     ///< average variable cost
    double afc;     ///< average fixed cost
    double atc;     ///< average total cost
    double mc;      ///< marginal cost
    double s_of_y;  ///< scale economies ATC/MC
};

/// Unit-cost constant of the variable-input bundle: (r/alpha)^alpha *
/// (w/(1-alpha))^(1-alpha); variable cost is then cbar*(y/a)^(1/nu).
double unit_cost_constant(double r, double w, double alpha);

/// Cost curves over an ascending positive output grid at given factor prices.
std::vector<CostCurvePoint> cost_curves(double a, std::span<const double> grid, double r, double w,
                                        const ModelParams& p);

/// Output level minimising average total cost (requires nu < 1, where ATC is
/// U-shaped and MC crosses it from below).
double minimum_efficient_scale(double a, double r, double w, const ModelParams& p);

/// Default log-spaced output grid for cost curves, centred on the threshold
/// firm's output: [lo_frac, hi_frac] * y(threshold).
std::vector<double> default_cost_grid(const SteadyState& ss, const ModelParams& p,
                                      double lo_frac = 0.01, double hi_frac = 100.0,
                                      std::size_t points = 200);

/// One aggregation identity: the reconstruction of an aggregate from the
/// firm cross-section versus its equilibrium value.
struct IdentityCheck {
    std::string name;
    double reconstructed;
    double target;
    double rel_err;          ///< (reconstructed-target)/target
    double standard_error;   ///< 0 for the quadrature panel
    double z;                ///< rel deviation over SE (0 when SE is 0)
};

struct AggregationReport {
    bool monte_carlo;
    std::vector<IdentityCheck> checks;  ///< K, L, Y, labour share
    double max_abs_rel_err() const;
    bool within(double tol_quadrature, double z_limit) const;
};

/// Deterministic oracle: Gauss-Kronrod integration of firm policies over the
/// active region, compared against the steady-state aggregates.
AggregationReport aggregation_check_quadrature(const SteadyState& ss, const ModelParams& p,
                                               double abs_tol = 1e-12);

/// Sampling oracle: n technology draws, firm policies evaluated per draw,
/// aggregates recovered as entrant-mass-weighted means with standard errors.
AggregationReport aggregation_check_monte_carlo(const SteadyState& ss, const ModelParams& p,
                                                std::size_t n, std::uint64_t seed, int jobs = 1);

std::string firm_csv_header();
std::string firm_csv_row(const FirmRecord& f);
std::string cost_curve_csv_header();
std::string cost_curve_csv_row(const CostCurvePoint& c);

}  // namespace firmscale
