#include "firmscale/params.hpp"

#include <cmath>
#include <cctype>
#include <cstdlib>
#include <fstream>
#include <map>
#include <sstream>

#include "firmscale/numeric.hpp"

namespace firmscale {

namespace {

void check_malformed(const ModelParams& p) {
    struct Field {
        const char* name;
        double value;
    };
    const Field fields[] = {{"sigma", p.sigma},   {"beta", p.beta}, {"delta", p.delta},
                            {"alpha", p.alpha},   {"nu", p.nu},     {"mu", p.mu},
                            {"phi", p.phi},       {"kappa", p.kappa}, {"theta", p.theta}};
    for (const auto& f : fields) {
        if (!std::isfinite(f.value))
            throw malformed_input_error(std::string("parameter ") + f.name + " is not finite");
        if (f.value <= 0.0)
            throw malformed_input_error(std::string("parameter ") + f.name + " must be positive, got " +
                                        format_full(f.value));
    }
    if (p.beta >= 1.0)
        throw malformed_input_error("beta must lie in (0,1), got " + format_full(p.beta));
    if (p.delta >= 1.0)
        throw malformed_input_error("delta must lie in (0,1), got " + format_full(p.delta));
    if (p.alpha >= 1.0)
        throw malformed_input_error("alpha must lie in (0,1), got " + format_full(p.alpha));
    if (p.mu < 1.0)
        throw malformed_input_error("mu must be >= 1, got " + format_full(p.mu));
}

// Assumption checks other than the entry-cost bound.
std::vector<Violation> margin_violations(const ModelParams& p) {
    std::vector<Violation> v;
    if (!(p.nu < p.mu))
        v.push_back({"Assumption 1: nu < mu",
                     "nu = " + format_full(p.nu) + ", mu = " + format_full(p.mu) +
                         " (margin " + format_full(p.mu - p.nu) + ")"});
    if (!(p.nu < 1.0 / p.alpha))
        v.push_back({"Assumption 1: nu < 1/alpha",
                     "nu = " + format_full(p.nu) + ", 1/alpha = " + format_full(1.0 / p.alpha) +
                         " (margin " + format_full(1.0 / p.alpha - p.nu) + ")"});
    if (!(p.theta > 1.0))
        v.push_back({"Pareto shape: theta > 1",
                     "theta = " + format_full(p.theta) + " (margin " + format_full(p.theta - 1.0) + ")"});
    if (p.nu < p.mu && !(p.theta_mu_nu() > 1.0))
        v.push_back({"Assumption 2: theta*(mu-nu) > 1",
                     "theta*(mu-nu) = " + format_full(p.theta_mu_nu()) + " (margin " +
                         format_full(p.theta_mu_nu() - 1.0) + ")"});
    if (p.alpha * p.nu < 1.0 && !(p.theta_one_alpha_nu() > 1.0))
        v.push_back({"Assumption 2: theta*(1-alpha*nu) > 1",
                     "theta*(1-alpha*nu) = " + format_full(p.theta_one_alpha_nu()) + " (margin " +
                         format_full(p.theta_one_alpha_nu() - 1.0) + ")"});
    return v;
}

}  // namespace

std::string ValidationReport::to_string() const {
    if (violations.empty()) return "valid: all assumptions hold\n";
    std::string out;
    for (const auto& v : violations) {
        out += "violation: ";
        out += v.assumption;
        out += " fails: ";
        out += v.detail;
        out += '\n';
    }
    return out;
}

ValidationReport validate(const ModelParams& p) {
    check_malformed(p);
    ValidationReport report;
    report.violations = margin_violations(p);
    if (report.violations.empty()) {
        const double kmax = kappa_max(p);
        if (!(p.kappa <= kmax))
            report.violations.push_back(
                {"entry-cost bound: kappa <= kappa_max",
                 "kappa = " + format_full(p.kappa) + ", kappa_max = " + format_full(kmax) +
                     " (margin " + format_full(kmax - p.kappa) + ")"});
    }
    return report;
}

void require_valid(const ModelParams& p) {
    const ValidationReport report = validate(p);
    if (report.ok()) return;
    std::vector<std::string> lines;
    lines.reserve(report.violations.size());
    for (const auto& v : report.violations) lines.push_back(v.assumption + ": " + v.detail);
    throw assumption_error("parameter vector violates model assumptions:\n" + report.to_string(),
                           std::move(lines));
}

DerivedConstants derived_constants(const ModelParams& p) {
    require_valid(p);
    DerivedConstants d;
    const double x = p.theta_mu_nu();
    d.gamma = std::pow(x / (x - 1.0), p.mu - p.nu);
    const double one_minus_u = (x - 1.0) / (p.theta * (p.mu - p.alpha * p.nu) - 1.0);
    d.u = 1.0 - one_minus_u;
    d.n_firms = one_minus_u / p.phi;
    d.s_l = (p.mu - p.alpha * p.nu - 1.0 / p.theta) / p.mu;
    d.omega = std::pow(d.n_firms, 1.0 - p.nu) * std::pow(d.u, (1.0 - p.alpha) * p.nu);
    d.r_ss = 1.0 / p.beta - (1.0 - p.delta);
    d.psi = std::pow(p.phi / (p.kappa * (x - 1.0)) * (1.0 - p.alpha) * (p.nu / p.mu) *
                         d.omega * d.gamma / d.u,
                     1.0 / (p.theta - 1.0));
    return d;
}

double kappa_max(const ModelParams& p) {
    check_malformed(p);
    if (const auto margins = margin_violations(p); !margins.empty()) {
        std::vector<std::string> lines;
        for (const auto& v : margins) lines.push_back(v.assumption + ": " + v.detail);
        throw assumption_error("kappa_max requires all other assumptions to hold", std::move(lines));
    }
    const double r = 1.0 / p.beta - (1.0 - p.delta);
    const double x = p.theta_mu_nu();
    const double base = std::pow(p.nu, p.nu) / p.mu * std::pow(p.alpha / r, p.alpha * p.nu) *
                        std::pow(p.phi * (1.0 - p.alpha), p.nu * (1.0 - p.alpha)) *
                        std::pow(p.theta, p.mu - 1.0) * std::pow(p.mu - p.nu, p.mu - p.nu) /
                        std::pow(x - 1.0, p.mu - p.alpha * p.nu);
    return std::pow(base, 1.0 / (1.0 - p.alpha * p.nu));
}

namespace {

double parse_number(const std::string& text, const std::string& origin, long line) {
    const char* begin = text.c_str();
    char* end = nullptr;
    const double v = std::strtod(begin, &end);
    if (end == begin || *end != '\0')
        throw parse_error("cannot parse numeric value '" + text + "'", origin, line);
    return v;
}

std::string_view trim(std::string_view s) {
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
    return s;
}

void assign_key(ModelParams& p, std::string_view key, double value, const std::string& origin,
                long line) {
    if (key == "sigma") p.sigma = value;
    else if (key == "beta") p.beta = value;
    else if (key == "delta") p.delta = value;
    else if (key == "alpha") p.alpha = value;
    else if (key == "nu") p.nu = value;
    else if (key == "mu") p.mu = value;
    else if (key == "phi") p.phi = value;
    else if (key == "kappa") p.kappa = value;
    else if (key == "theta") p.theta = value;
    else throw parse_error("unknown parameter key '" + std::string(key) + "'", origin, line);
}

}  // namespace

ModelParams params_from_config_text(std::string_view text, const std::string& origin) {
    ModelParams p;
    std::map<std::string, bool> seen;
    std::istringstream stream{std::string(text)};
    std::string raw;
    long line_no = 0;
    while (std::getline(stream, raw)) {
        ++line_no;
        std::string_view line = raw;
        if (const auto hash = line.find('#'); hash != std::string_view::npos)
            line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string_view::npos)
            throw parse_error("expected 'key = value', got '" + std::string(line) + "'", origin,
                              line_no);
        const std::string key{trim(line.substr(0, eq))};
        const std::string value{trim(line.substr(eq + 1))};
        if (seen[key])
            throw parse_error("duplicate key '" + key + "'", origin, line_no);
        seen[key] = true;
        assign_key(p, key, parse_number(value, origin, line_no), origin, line_no);
    }
    static constexpr const char* required[] = {"beta", "delta", "alpha", "nu",
                                               "mu",   "phi",   "kappa", "theta"};
    for (const char* key : required)
        if (!seen[key]) throw parse_error(std::string("missing required key '") + key + "'", origin, 0);
    return p;
}

ModelParams params_from_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw io_error("cannot open config file: " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return params_from_config_text(buf.str(), path);
}

void apply_override(ModelParams& p, std::string_view assignment) {
    const auto eq = assignment.find('=');
    if (eq == std::string_view::npos)
        throw parse_error("override must look like key=value, got '" + std::string(assignment) + "'",
                          "<override>", 0);
    const std::string key{trim(assignment.substr(0, eq))};
    const std::string value{trim(assignment.substr(eq + 1))};
    assign_key(p, key, parse_number(value, "<override>", 0), "<override>", 0);
}

}  // namespace firmscale
