// Acceptance suite: thirteen numbered criteria, one pass/fail line each.
// Exits non-zero if any criterion fails. Tolerances are fixed here, not
// configurable.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <random>
#include <string>
#include <vector>

#include "firmscale/calibration.hpp"
#include "firmscale/firms.hpp"
#include "firmscale/numeric.hpp"
#include "firmscale/pareto.hpp"
#include "firmscale/scenario.hpp"
#include "firmscale/statics.hpp"
#include "firmscale/steady_state.hpp"
#include "firmscale/transition.hpp"
#include "support/test_util.hpp"

using namespace firmscale;
using firmscale::testing::random_valid_params;
using firmscale::testing::rel;

namespace {

const std::string kData = FIRMSCALE_DATA_DIR;

struct Criterion {
    int number;
    const char* title;
    bool pass;
    std::string detail;
};

std::vector<Criterion> g_results;

void record(int number, const char* title, bool pass, const std::string& detail) {
    g_results.push_back({number, title, pass, detail});
    std::printf("[%2d/13] %s  %s (%s)\n", number, pass ? "PASS" : "FAIL", title, detail.c_str());
    std::fflush(stdout);
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

// 1. closed form vs independent Newton root on 100 random draws, < 10 s
void criterion_1() {
    const auto t0 = std::chrono::steady_clock::now();
    std::mt19937_64 rng(1001);
    double worst = 0.0;
    for (int i = 0; i < 100; ++i) {
        const ModelParams p = random_valid_params(rng);
        const SteadyState closed = solve_closed_form(p);
        const SteadyState numeric = solve_numeric(p);
        const double fields[][2] = {
            {numeric.K, closed.K},     {numeric.C, closed.C},       {numeric.Y, closed.Y},
            {numeric.I, closed.I},     {numeric.r, closed.r},       {numeric.w, closed.w},
            {numeric.abar, closed.abar}, {numeric.ahat, closed.ahat}, {numeric.J, closed.J},
            {numeric.E, closed.E},     {numeric.N, closed.N},       {numeric.tfp, closed.tfp},
            {numeric.omega, closed.omega}, {numeric.u, closed.u},   {numeric.s_l, closed.s_l},
            {numeric.T, closed.T},     {numeric.Pi, closed.Pi}};
        for (const auto& f : fields)
            worst = std::max(worst, std::abs(f[0] - f[1]) / std::max(std::abs(f[1]), 1e-12));
    }
    const double dt = seconds_since(t0);
    record(1, "steady state: numeric matches closed form (100 draws, 1e-8)",
           worst < 1e-8 && dt < 10.0,
           "max rel err " + format_full(worst) + ", " + std::to_string(dt).substr(0, 5) + " s");
}

// 2. Gamma closed form vs quadrature oracle, 20 random points and benchmark
void criterion_2() {
    std::mt19937_64 rng(1002);
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    double worst = 0.0;
    for (int i = 0; i < 20; ++i) {
        const ModelParams p = random_valid_params(rng);
        const double cutoff = 0.95 * unif(rng);
        worst = std::max(worst, rel(power_mean_closed(cutoff, p), power_mean_quadrature(cutoff, p)));
    }
    const ModelParams bench;
    const double gamma = gamma_closed_form(bench);
    const bool bench_ok = std::abs(gamma - 1.14140) < 5e-6;
    record(2, "power-mean constant matches its quadrature oracle (1e-10)",
           worst < 1e-10 && bench_ok,
           "max rel err " + format_full(worst) + ", benchmark Gamma = " + format_full(gamma));
}

// 3. overhead-cost elasticity formula vs finite differences; markup invariance
void criterion_3() {
    std::mt19937_64 rng(1003);
    double worst = 0.0;
    for (int i = 0; i < 20; ++i) {
        const ModelParams p = random_valid_params(rng, 0.05, 0.8);
        worst = std::max(worst, fd_check(p, Axis::phi).rel_err);
    }
    ModelParams cr;
    cr.nu = 1.0;
    const double cr_value = dln_tfp_dln_phi(cr).total;
    const bool cr_ok = std::abs(cr_value - 0.75 / 6.5) < 1e-12;

    ModelParams lo;
    lo.mu = 1.21;
    ModelParams hi;
    hi.mu = 1.28;
    const double mu_gap = std::abs(dln_tfp_dln_phi(lo).total - dln_tfp_dln_phi(hi).total);

    record(3, "dlnTFP/dlnphi: analytic = FD (1e-6); invariant to the markup (1e-10)",
           worst < 1e-6 && cr_ok && mu_gap < 1e-10,
           "max rel err " + format_full(worst) + ", nu=1 value " + format_full(cr_value) +
               ", mu gap " + format_full(mu_gap));
}

// 4. entry-cost statics: allocative exactly zero, technical negative by FD
void criterion_4() {
    const ModelParams p;
    const KappaElasticity e = dln_dkappa(p);
    ModelParams a = p, b = p;
    a.kappa = 0.012;
    b.kappa = 0.016;
    const bool omega_fixed = derived_constants(a).omega == derived_constants(b).omega;
    const double fd_omega = elasticity_fd(p, Axis::kappa, 1);
    const double fd_ahat = elasticity_fd(p, Axis::kappa, 2);
    record(4, "entry-cost statics: dlnOmega/dlnkappa = 0, dlnAhat/dlnkappa < 0",
           e.allocative == 0.0 && omega_fixed && std::abs(fd_omega) < 1e-12 && fd_ahat < 0.0 &&
               rel(fd_ahat, e.technical) < 1e-6,
           "fd allocative " + format_full(fd_omega) + ", fd technical " + format_full(fd_ahat));
}

// 5. aggregation identities: quadrature panel at 1e-8, MC panel within 3 s.e.
void criterion_5() {
    const auto t0 = std::chrono::steady_clock::now();
    const ModelParams p;
    const SteadyState ss = solve_closed_form(p);
    const AggregationReport quad = aggregation_check_quadrature(ss, p);
    const AggregationReport mc = aggregation_check_monte_carlo(ss, p, 1000000, 42, 4);
    double worst_z = 0.0;
    for (const auto& c : mc.checks) worst_z = std::max(worst_z, std::abs(c.z));
    const double dt = seconds_since(t0);
    record(5, "aggregation identities: quadrature 1e-8, monte carlo 3 s.e.",
           quad.within(1e-8, 3.0) && mc.within(1e-8, 3.0) && dt < 30.0,
           "quad max rel " + format_full(quad.max_abs_rel_err()) + ", worst |z| " +
               format_full(worst_z) + ", " + std::to_string(dt).substr(0, 5) + " s");
}

// 6. scale-economies schedule over 1000 active firms
void criterion_6() {
    const ModelParams p;
    const SteadyState ss = solve_closed_form(p);
    const auto grid = logspace(1.0, 100.0, 1000);
    bool decreasing = true, identity = true, bounds = true;
    double prev = p.mu + 1.0;
    for (double mult : grid) {
        const FirmRecord f = firm_policy(ss.abar * mult, ss, p);
        decreasing = decreasing && f.s < prev;
        prev = f.s;
        bounds = bounds && f.s > p.nu;
        identity = identity && std::abs(f.s - p.mu * (1.0 - f.pi / f.py)) < 1e-10;
    }
    const FirmRecord at_cutoff = firm_policy(ss.abar, ss, p);
    const bool cutoff_ok = std::abs(at_cutoff.s - p.mu) < 1e-12;
    record(6, "scale economies: decreasing, S(cutoff)=mu, inf > nu, S = mu(1-pi/py)",
           decreasing && identity && bounds && cutoff_ok,
           "S(cutoff) = " + format_full(at_cutoff.s) + ", S(largest) = " + format_full(prev));
}

// 7. production-side illustration: small vs large firm labour response
void criterion_7() {
    const LabourRiseResult small = production_labour_response(10.0, 9.0, 0.10);
    const LabourRiseResult large = production_labour_response(40.0, 9.0, 0.10);
    const bool ok = std::abs(small.pct_change - 1.0) < 1e-12 &&
                    std::abs(large.pct_change - 4.0 / 31.0) < 1e-12;
    record(7, "total-labour rise: +100% production labour (small), +12.9% (large)", ok,
           "small " + format_full(small.pct_change) + ", large " + format_full(large.pct_change));
}

// 8. cost-curve geometry in the three returns-to-scale regimes
void criterion_8() {
    const ModelParams bench;
    const SteadyState ss = solve_closed_form(bench);
    const double a = 2.0 * ss.abar;

    ModelParams drs = bench;
    drs.nu = 0.9;
    const double y_star = minimum_efficient_scale(a, ss.r, ss.w, drs);
    const auto mes = cost_curves(a, std::vector<double>{y_star}, ss.r, ss.w, drs).front();
    const bool drs_ok = std::abs(mes.atc - mes.mc) / mes.atc < 1e-6 &&
                        std::abs(mes.s_of_y - 1.0) < 1e-6;

    ModelParams crs = bench;
    crs.nu = 1.0;
    const auto crs_curve = cost_curves(a, logspace(0.01, 1e4, 200), ss.r, ss.w, crs);
    bool crs_ok = true;
    for (const auto& pt : crs_curve) crs_ok = crs_ok && pt.s_of_y > 1.0;
    crs_ok = crs_ok && crs_curve.back().s_of_y < 1.01;

    const auto irs_curve = cost_curves(a, logspace(0.1, 100.0, 100), ss.r, ss.w, bench);
    bool irs_ok = true;
    for (std::size_t i = 1; i < irs_curve.size(); ++i)
        irs_ok = irs_ok && irs_curve[i].mc < irs_curve[i - 1].mc;

    record(8, "cost curves: S=1 at MES (nu<1), S>1 falling to 1 (nu=1), MC falling (nu>1)",
           drs_ok && crs_ok && irs_ok,
           "|ATC-MC|/ATC at MES = " + format_full(std::abs(mes.atc - mes.mc) / mes.atc));
}

// 9. transition: Newton vs shooting, residuals, constants along the path
void criterion_9() {
    const auto t0 = std::chrono::steady_clock::now();
    const ModelParams p;
    const SteadyState ss = solve_closed_form(p);
    const TransitionPath path = solve_transition(p, 0.9 * ss.K, 200);
    const double newton_seconds = seconds_since(t0);

    const ShootingResult shot = solve_by_shooting(p, 0.9 * ss.K, 200);
    double worst_k = 0.0;
    for (int t = 0; t <= 200; ++t)
        worst_k = std::max(worst_k, std::abs(shot.path.k[t] - path.k[t]) / ss.K);

    double worst_const = 0.0;
    for (const auto& b : path.blocks) {
        worst_const = std::max(worst_const, std::abs(b.u - ss.u));
        worst_const = std::max(worst_const, std::abs(b.N - ss.N));
        worst_const = std::max(worst_const, std::abs(b.w / b.Y - ss.s_l));
    }
    record(9, "transition: shooting agreement 1e-6, Euler < 1e-8, constants to 1e-12, < 5 s",
           worst_k < 1e-6 && path.max_euler_residual() < 1e-8 && worst_const < 1e-12 &&
               newton_seconds < 5.0,
           "max |K gap| " + format_full(worst_k) + ", max Euler " +
               format_full(path.max_euler_residual()) + ", " +
               std::to_string(newton_seconds).substr(0, 5) + " s");
}

// 10. calibration reproduction, with the documented degraded path
void criterion_10() {
    const ModelParams table1;  // phi = 0.85, kappa = 0.017, benchmark midpoints
    const double km = kappa_max(table1);
    const double phi_cal = phi_from_inactive_share(0.10, table1);

    const bool phi_two_sig = std::abs(phi_cal - 0.85) / 0.85 < 0.05;
    const bool kappa_two_sig = std::abs(km - 0.017) / 0.017 < 0.05;

    // round-trip property: phi from J, J back from phi
    ModelParams solved = table1;
    solved.phi = phi_cal;
    const SteadyState ss = solve_closed_form(solved);
    const bool round_trip = std::abs(ss.J - 0.10) < 1e-8;
    const bool ratio_ok = kappa_to_overhead_ratio(ss, solved).ratio < 1.0;

    bool pass;
    std::string detail;
    if (phi_two_sig && kappa_two_sig) {
        pass = ratio_ok;
        detail = "matched to two significant figures";
    } else {
        // Degraded path per the acceptance contract: the published pair
        // (phi = 0.85, kappa = 0.017) is not jointly consistent with the
        // model's closed forms, and the auxiliary annual inputs behind it
        // are unpublished. The verifiable properties must still hold.
        pass = round_trip && ratio_ok;
        detail = "two-sig-fig match FAILS and is documented: model implies kappa_max = " +
                 format_full(km) + " at phi = 0.85 (vs published 0.017), phi(J=0.10) = " +
                 format_full(phi_cal) + " at kappa = 0.017 (vs published 0.85); round trip |J - 0.10| = " +
                 format_full(std::abs(ss.J - 0.10)) + ", kappa/(phi w) = " +
                 format_full(kappa_to_overhead_ratio(ss, solved).ratio);
    }
    record(10, "calibration reproduction (or documented degraded round trip)", pass, detail);
}

// 11. rising returns to scale, frozen vs rising markup
void criterion_11() {
    const ScenarioResult fixed =
        run_scenario(load_scenario_spec(kData + "/scenarios/rising_rts_fixed_mu.cfg"), 4);
    const ScenarioResult rising =
        run_scenario(load_scenario_spec(kData + "/scenarios/rising_rts_rising_mu.cfg"), 4);
    const double terminal = fixed.years.back().tfp_model_index;
    bool lower_every_year = true;
    for (std::size_t i = 1; i < fixed.years.size(); ++i)
        lower_every_year =
            lower_every_year && rising.years[i].tfp_model_index < fixed.years[i].tfp_model_index;
    record(11, "counterfactual: frozen-markup index ends >= 1.20; rising markups lower every year",
           terminal >= 1.20 && lower_every_year,
           "terminal index " + format_full(terminal) + " vs " +
               format_full(rising.years.back().tfp_model_index));
}

// 12. overhead-share exercise: monotone rise past 1.05; rising markups undo it
void criterion_12() {
    const ScenarioResult fixed =
        run_scenario(load_scenario_spec(kData + "/scenarios/rising_overhead_fixed_mu.cfg"), 4);
    const ScenarioResult rising =
        run_scenario(load_scenario_spec(kData + "/scenarios/rising_overhead_rising_mu.cfg"), 4);
    bool monotone = true;
    for (std::size_t i = 1; i < fixed.years.size(); ++i)
        monotone = monotone &&
                   fixed.years[i].tfp_model_index > fixed.years[i - 1].tfp_model_index;
    const double terminal = fixed.years.back().tfp_model_index;
    const bool rising_below = rising.years.back().tfp_model_index < terminal;
    record(12, "overhead exercise: monotone rise to >= 1.05; rising markups end below it",
           monotone && terminal >= 1.05 && rising_below,
           "terminal " + format_full(terminal) + " vs rising-mu " +
               format_full(rising.years.back().tfp_model_index));
}

// 13. validation suite: six constructed violations, correctly named; deterministic
void criterion_13() {
    struct Case {
        ModelParams params;
        const char* expect;
    };
    std::vector<Case> cases;
    {
        ModelParams p;
        p.nu = 1.30;
        cases.push_back({p, "Assumption 1: nu < mu"});
    }
    {
        ModelParams p;
        p.alpha = 0.9;
        p.nu = 1.15;
        p.mu = 1.30;
        cases.push_back({p, "Assumption 1: nu < 1/alpha"});
    }
    {
        ModelParams p;
        p.theta = 4.0;  // 4 * 0.225 = 0.9
        cases.push_back({p, "Assumption 2: theta*(mu-nu) > 1"});
    }
    {
        ModelParams p;
        p.alpha = 0.8;
        p.nu = 1.15;
        p.mu = 2.2;
        p.theta = 11.0;  // theta(1-alpha*nu) = 0.88
        cases.push_back({p, "Assumption 2: theta*(1-alpha*nu) > 1"});
    }
    {
        ModelParams p;
        p.theta = 0.9;
        p.mu = 2.4;  // isolates the raw shape bound
        cases.push_back({p, "Pareto shape: theta > 1"});
    }
    {
        ModelParams p;
        p.kappa = 1.01 * kappa_max(p);
        cases.push_back({p, "entry-cost bound: kappa <= kappa_max"});
    }
    bool all_named = true;
    bool deterministic = true;
    for (const auto& c : cases) {
        const ValidationReport rep = validate(c.params);
        bool found = false;
        for (const auto& v : rep.violations) found = found || v.assumption == c.expect;
        all_named = all_named && !rep.ok() && found;
        deterministic = deterministic && rep.to_string() == validate(c.params).to_string();
    }
    record(13, "validation: six constructed violations named; reports byte-stable",
           all_named && deterministic,
           all_named ? "all six named" : "a violation was unnamed or misnamed");
}

}  // namespace

int main() {
    std::printf("acceptance suite\n");
    criterion_1();
    criterion_2();
    criterion_3();
    criterion_4();
    criterion_5();
    criterion_6();
    criterion_7();
    criterion_8();
    criterion_9();
    criterion_10();
    criterion_11();
    criterion_12();
    criterion_13();

    int failures = 0;
    for (const auto& c : g_results) failures += c.pass ? 0 : 1;
    std::printf("%d/13 criteria passed\n", 13 - failures);
    return failures == 0 ? 0 : 1;
}
