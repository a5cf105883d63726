#pragma once

#include <span>
#include <string>
#include <vector>

#include "firmscale/steady_state.hpp"

namespace firmscale {

/// TFP split into its logged components. ln_tfp = ln_omega + ln_ahat and
/// ln_ahat = ln_gamma + ln_abar hold exactly.
struct TFPDecomposition {
    double ln_tfp;
    double ln_omega;
    double ln_ahat;
    double ln_gamma;
    double ln_abar;
};

/// Decomposition at the steady state of a parameter vector.
TFPDecomposition decompose(const ModelParams& p);

/// Elasticity of steady-state TFP with respect to the overhead cost,
/// split into its allocative and technical parts:
///   allocative = -(1-nu),  technical = nu(1-alpha)/(theta(1-alpha nu)-1).
struct PhiElasticity {
    double total;
    double allocative;
    double technical;
};
PhiElasticity dln_tfp_dln_phi(const ModelParams& p);

/// Elasticity of the TFP components with respect to the entry cost. The
/// allocative part is identically zero; the technical part is
/// -(1-alpha nu)/(theta(1-alpha nu)-1) < 0.
struct KappaElasticity {
    double allocative;
    double technical;
};
KappaElasticity dln_dkappa(const ModelParams& p);

enum class Axis { phi, nu, mu, kappa };
const char* axis_name(Axis a);
Axis axis_from_name(const std::string& name);

/// One sweep row; invalid grid points are flagged, never dropped, keeping
/// output tables rectangular.
struct SweepRow {
    double axis_value;
    bool valid;
    TFPDecomposition decomp;  ///< NaN-filled when invalid
    double J, N, u, s_l;
};

std::vector<SweepRow> sweep(const ModelParams& base, Axis axis, std::span<const double> grid,
                            int jobs = 1);

std::string sweep_csv_header();
std::string sweep_csv_row(const SweepRow& row);

/// Central log-space finite difference of a steady-state decomposition
/// component along one axis. `component` selects the field of
/// TFPDecomposition (0 ln_tfp, 1 ln_omega, 2 ln_ahat).
double elasticity_fd(const ModelParams& p, Axis axis, int component = 0, double rel_step = 1e-5);

/// Five-point central stencil (Richardson-extrapolated) for the axes without
/// a closed form; used as the primary value on the nu axis.
double elasticity_fd5(const ModelParams& p, Axis axis, int component = 0, double rel_step = 1e-3);

/// Analytic-vs-finite-difference comparison where a closed form exists
/// (phi and kappa axes). Shrinks the step and retries when a perturbed point
/// leaves the validity region.
struct FdCheck {
    double analytic;
    double fd;
    double rel_err;
};
FdCheck fd_check(const ModelParams& p, Axis axis, double rel_step = 1e-5);

}  // namespace firmscale
