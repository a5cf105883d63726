#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace firmscale {

/// Base class for all library errors.
struct model_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Non-finite or sign-violating raw inputs. Distinct from an assumption
/// violation: the parameter vector is not even well formed.
struct malformed_input_error : model_error {
    using model_error::model_error;
};

/// One or more model assumptions fail for an otherwise well-formed
/// parameter vector. Carries the individual violation messages.
struct assumption_error : model_error {
    std::vector<std::string> violations;
    assumption_error(const std::string& what, std::vector<std::string> v)
        : model_error(what), violations(std::move(v)) {}
};

/// theta*(mu-nu) <= 1: the scaled-technology mean does not exist.
struct divergent_moment_error : model_error {
    using model_error::model_error;
};

/// Entry cost above the admissible bound; the implied cutoff would fall
/// below the minimum technology draw.
struct infeasible_entry_cost_error : model_error {
    double kappa_max;
    infeasible_entry_cost_error(const std::string& what, double kmax)
        : model_error(what), kappa_max(kmax) {}
};

struct solver_error : model_error {
    double residual_norm;
    int iterations;
    solver_error(const std::string& what, double resid, int iters)
        : model_error(what), residual_norm(resid), iterations(iters) {}
};

struct horizon_too_short_error : model_error {
    double terminal_gap;
    horizon_too_short_error(const std::string& what, double gap)
        : model_error(what), terminal_gap(gap) {}
};

struct calibration_error : model_error {
    using model_error::model_error;
};

/// File/CSV/config parsing failure; carries the 1-based line number when known.
struct parse_error : model_error {
    std::string path;
    long line;
    parse_error(const std::string& what, std::string file, long line_no)
        : model_error(what), path(std::move(file)), line(line_no) {}
};

struct io_error : model_error {
    using model_error::model_error;
};

}  // namespace firmscale
