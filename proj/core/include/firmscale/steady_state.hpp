#pragma once

#include <array>
#include <optional>
#include <string>

#include "firmscale/params.hpp"

namespace firmscale {

/// Steady-state equilibrium levels (labour supply normalised to 1).
struct SteadyState {
    double K;      ///< aggregate capital
    double C;      ///< consumption
    double Y;      ///< output
    double I;      ///< investment, delta*K
    double r;      ///< rental rate
    double w;      ///< wage
    double abar;   ///< threshold technology, >= 1
    double ahat;   ///< power-mean technology
    double J;      ///< cutoff draw / exit probability
    double E;      ///< entrant mass
    double N;      ///< active-firm mass
    double tfp;    ///< total factor productivity
    double omega;  ///< allocative efficiency
    double u;      ///< production share of labour
    double s_l;    ///< labour share of output
    double T;      ///< lump-sum transfer, E*kappa
    double Pi;     ///< aggregate profits (zero in equilibrium)
};

/// Exact steady state from the closed forms. Throws
/// infeasible_entry_cost_error (naming the bound) if kappa implies a cutoff
/// below the minimum technology draw.
SteadyState solve_closed_form(const ModelParams& p);

/// Threshold technology evaluated directly from its single-equation closed
/// form, an expression route independent of the psi * K^(alpha nu/(theta-1))
/// chain used by solve_closed_form. The two must agree to ~1e-10 relative.
double abar_direct_closed_form(const ModelParams& p);

/// Relative residuals of the seven-equation reduced system at a candidate
/// state: resource constraint, steady Euler, production function, rental
/// rate, factor-market wage, free-entry wage, TFP identity. Each residual is
/// normalised by the larger magnitude of the two sides.
std::array<double, 7> residuals(const SteadyState& s, const ModelParams& p);

/// Names of the seven residuals, index-aligned with residuals().
const std::array<std::string, 7>& residual_names();

struct NumericSolveOptions {
    double tol = 1e-12;   ///< max relative residual accepted
    int max_iter = 200;
    int max_halvings = 40;
};

struct NumericSolveStats {
    int iterations = 0;
    double residual_norm = 0.0;
};

/// Damped-Newton root of the reduced system, independent of the closed-form
/// path. Starts from a closed-form-free guess unless one is supplied.
SteadyState solve_numeric(const ModelParams& p, const SteadyState* guess = nullptr,
                          const NumericSolveOptions& opt = {}, NumericSolveStats* stats = nullptr);

/// 17-column CSV serialisation in the documented order:
/// K,C,Y,I,r,w,abar,ahat,J,E,N,tfp,omega,u,s_l,T,Pi
std::string steady_state_csv_header();
std::string steady_state_csv_row(const SteadyState& s);

}  // namespace firmscale
