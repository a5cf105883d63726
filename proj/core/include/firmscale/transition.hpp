#pragma once

#include <string>
#include <vector>

#include "firmscale/steady_state.hpp"

namespace firmscale {

/// Within-period statics implied by the capital stock. Under Pareto, u and N
/// are parameter constants; everything else is a power of K.
struct PeriodBlock {
    double Y;
    double r;
    double w;
    double abar;
    double tfp;
    double N;
    double J;
    double u;
};

PeriodBlock per_period_block(double K, const ModelParams& p);

/// Elasticity of the rental rate with respect to capital,
/// (1 - theta(1-alpha*nu)) / (theta - 1); negative under the assumptions.
double dlnr_dlnk(const ModelParams& p);

/// A perfect-foresight path of the two-variable reduced system. k and c have
/// length horizon+1 (t = 0..T); the residual vectors have length horizon.
struct TransitionPath {
    int horizon;
    std::vector<double> k;
    std::vector<double> c;
    std::vector<PeriodBlock> blocks;        ///< per t = 0..T
    std::vector<double> euler_residuals;    ///< t = 0..T-1, relative form
    std::vector<double> resource_residuals; ///< t = 0..T-1, relative form
    double max_euler_residual() const;
    double max_resource_residual() const;
};

struct TransitionOptions {
    double tol = 1e-9;          ///< max relative residual accepted
    int max_iter = 100;
    int max_halvings = 40;
    bool analytic_jacobian = true;
    int max_doublings = 3;      ///< automatic horizon doubling on terminal-gap failure
    double terminal_gap_factor = 100.0;  ///< gap threshold = factor * tol
};

/// Stacked-Newton solution of the boundary-value problem with K_0 fixed and
/// K_{T+1} pinned to the steady state of `p`. Parameter changes are treated
/// as unanticipated and permanent: pass the post-change parameters and the
/// pre-change capital stock.
TransitionPath solve_transition(const ModelParams& p, double k0, int horizon,
                                const TransitionOptions& opt = {});

/// Forward-shooting oracle: bisects on initial consumption until the
/// simulated path converges to the steady state, then clamps the tail. Used
/// as an independent check on the stacked Newton solver.
struct ShootingResult {
    double c0;                 ///< saddle-path initial consumption
    int settled_at;            ///< first period the path is clamped to steady state
    TransitionPath path;
};
ShootingResult solve_by_shooting(const ModelParams& p, double k0, int horizon,
                                 double clamp_rel_gap = 1e-7);

/// Simulates the reduced system forward from (k0, c0) and reports how the
/// path leaves the saddle: +1 if consumption was too low (capital overshoots
/// the steady state), -1 if too high (capital collapses), 0 if it stayed on
/// the saddle for `periods` steps. Used to demonstrate saddle-path
/// uniqueness numerically.
int classify_shooting(const ModelParams& p, double k0, double c0, int periods);

std::string transition_csv_header();
std::string transition_csv_row(int t, const TransitionPath& path);

}  // namespace firmscale
