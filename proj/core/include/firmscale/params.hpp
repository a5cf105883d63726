#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "firmscale/errors.hpp"

namespace firmscale {

/// Full parameter vector of the model. The technology scale (minimum draw)
/// is a pure normalisation and is fixed at 1.
struct ModelParams {
    double sigma = 1.0;  ///< CRRA curvature; steady state is invariant to it
    double beta = 0.96;  ///< discount factor, in (0,1)
    double delta = 0.08; ///< depreciation rate, in (0,1)
    double alpha = 0.25; ///< capital share in variable cost, in (0,1)
    double nu = 1.02;    ///< returns to scale in variable inputs
    double mu = 1.245;   ///< markup, >= 1
    double phi = 0.85;   ///< labour-denominated overhead cost
    double kappa = 0.017;///< entry cost in consumption units
    double theta = 10.0; ///< Pareto shape of the technology distribution

    static constexpr double tech_scale = 1.0;  // h

    double theta_mu_nu() const { return theta * (mu - nu); }
    double theta_one_alpha_nu() const { return theta * (1.0 - alpha * nu); }
};

struct Violation {
    std::string assumption;  ///< which assumption fails, e.g. "Assumption 1: nu < mu"
    std::string detail;      ///< offending values and margin
};

struct ValidationReport {
    std::vector<Violation> violations;
    bool ok() const { return violations.empty(); }
    std::string to_string() const;
};

/// Checks every model assumption. Enumerates all violations rather than
/// failing on the first; assumptions are strict, with no epsilon slack.
/// Throws malformed_input_error for non-finite or sign-violating fields,
/// which is a different failure class than an assumption violation.
ValidationReport validate(const ModelParams& p);

/// Throws assumption_error unless validate(p) is clean.
void require_valid(const ModelParams& p);

/// Closed-form constants implied by a valid parameter vector.
struct DerivedConstants {
    double gamma;    ///< unconditional mean of scaled technology
    double u;        ///< production share of aggregate labour
    double n_firms;  ///< active firms per unit labour
    double s_l;      ///< aggregate labour share of output
    double omega;    ///< allocative-efficiency constant
    double psi;      ///< cutoff-from-capital constant
    double r_ss;     ///< steady-state rental rate, 1/beta - (1-delta)
};

DerivedConstants derived_constants(const ModelParams& p);

/// Largest admissible entry cost given the other parameters (p.kappa is
/// ignored). At this bound the steady-state cutoff equals the minimum
/// technology draw, so no entrant stays inactive.
double kappa_max(const ModelParams& p);

/// Parses a flat key = value config. Recognised keys: sigma, beta, delta,
/// alpha, nu, mu, phi, kappa, theta. All are required except sigma, which
/// defaults to 1 (log utility). Unknown keys, duplicates and unparsable
/// values are errors. '#' starts a comment; blank lines are ignored.
ModelParams params_from_config_text(std::string_view text, const std::string& origin);
ModelParams params_from_config(const std::string& path);

/// Applies one "key=value" override to an existing vector. Same key set as
/// the config file.
void apply_override(ModelParams& p, std::string_view assignment);

}  // namespace firmscale
