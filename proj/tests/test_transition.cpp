#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "firmscale/transition.hpp"
#include "support/test_util.hpp"

using namespace firmscale;
using firmscale::testing::rel;

namespace {
const ModelParams bench;
const SteadyState ss = solve_closed_form(bench);
}  // namespace

TEST_CASE("per-period block") {
    SUBCASE("steady-state capital reproduces the steady state") {
        const PeriodBlock b = per_period_block(ss.K, bench);
        CHECK(rel(b.Y, ss.Y) < 1e-12);
        CHECK(rel(b.r, ss.r) < 1e-12);
        CHECK(rel(b.w, ss.w) < 1e-12);
        CHECK(rel(b.abar, ss.abar) < 1e-12);
        CHECK(rel(b.tfp, ss.tfp) < 1e-12);
        CHECK(rel(b.J, ss.J) < 1e-10);
    }
    SUBCASE("cutoff scales as a power of capital") {
        const PeriodBlock b1 = per_period_block(ss.K, bench);
        const PeriodBlock b2 = per_period_block(2.0 * ss.K, bench);
        const double expected =
            std::pow(2.0, bench.alpha * bench.nu / (bench.theta - 1.0));
        CHECK(rel(b2.abar / b1.abar, expected) < 1e-12);
    }
    SUBCASE("rental-rate elasticity matches the closed form") {
        const double h = 1e-6;
        const double fd = (std::log(per_period_block(ss.K * std::exp(h), bench).r) -
                           std::log(per_period_block(ss.K * std::exp(-h), bench).r)) /
                          (2.0 * h);
        CHECK(rel(fd, dlnr_dlnk(bench)) < 1e-7);
        CHECK(dlnr_dlnk(bench) < 0.0);
    }
}

TEST_CASE("transition from the steady state is flat") {
    const TransitionPath path = solve_transition(bench, ss.K, 50);
    CHECK(path.max_euler_residual() < 1e-12);
    CHECK(path.max_resource_residual() < 1e-12);
    for (double k : path.k) CHECK(rel(k, ss.K) < 1e-10);
}

TEST_CASE("ten percent capital gap") {
    const TransitionPath path = solve_transition(bench, 0.9 * ss.K, 200);

    SUBCASE("capital rises monotonically to the steady state") {
        CHECK(path.k.front() == 0.9 * ss.K);
        for (std::size_t t = 1; t < path.k.size(); ++t) {
            CHECK(path.k[t] >= path.k[t - 1] * (1.0 - 1e-14));
            if (rel(path.k[t - 1], ss.K) > 1e-12) CHECK(path.k[t] > path.k[t - 1]);
        }
        CHECK(rel(path.k.back(), ss.K) < 1e-6);
    }
    SUBCASE("residuals are tight") {
        CHECK(path.max_euler_residual() < 1e-9);
        CHECK(path.max_resource_residual() < 1e-9);
    }
    SUBCASE("u, N and the labour share are constant along the path") {
        for (int t = 0; t <= path.horizon; ++t) {
            const PeriodBlock& b = path.blocks[t];
            CHECK(std::abs(b.u - ss.u) < 1e-12);
            CHECK(std::abs(b.N - ss.N) < 1e-12);
            // labour share from the period's prices, not from the constants
            CHECK(std::abs(b.w * 1.0 / b.Y - ss.s_l) < 1e-12);
        }
    }
    SUBCASE("shooting oracle agrees with the stacked Newton path") {
        const ShootingResult shot = solve_by_shooting(bench, 0.9 * ss.K, 200);
        double worst = 0.0;
        for (int t = 0; t <= 200; ++t)
            worst = std::max(worst, std::abs(shot.path.k[t] - path.k[t]) / ss.K);
        CHECK(worst < 1e-6);
    }
    SUBCASE("finite-difference Jacobian reproduces the analytic path") {
        TransitionOptions opt;
        opt.analytic_jacobian = false;
        const TransitionPath fd_path = solve_transition(bench, 0.9 * ss.K, 200, opt);
        for (int t = 0; t <= 200; ++t) CHECK(rel(fd_path.k[t], path.k[t]) < 1e-9);
    }
}

TEST_CASE("saddle path is numerically unique") {
    const ShootingResult shot = solve_by_shooting(bench, 0.9 * ss.K, 200);
    // nudging initial consumption off the saddle path diverges on both sides
    CHECK(classify_shooting(bench, 0.9 * ss.K, shot.c0 * 1.01, 4000) == -1);
    CHECK(classify_shooting(bench, 0.9 * ss.K, shot.c0 * 0.99, 4000) == +1);
}

TEST_CASE("approach from above") {
    const TransitionPath path = solve_transition(bench, 1.15 * ss.K, 200);
    for (std::size_t t = 1; t < path.k.size(); ++t) {
        CHECK(path.k[t] <= path.k[t - 1] * (1.0 + 1e-14));
        if (rel(path.k[t - 1], ss.K) > 1e-12) CHECK(path.k[t] < path.k[t - 1]);
    }
    CHECK(path.max_euler_residual() < 1e-9);
    const ShootingResult shot = solve_by_shooting(bench, 1.15 * ss.K, 200);
    double worst = 0.0;
    for (int t = 0; t <= 200; ++t)
        worst = std::max(worst, std::abs(shot.path.k[t] - path.k[t]) / ss.K);
    CHECK(worst < 1e-6);
}

TEST_CASE("permanent parameter change lands on the new steady state") {
    ModelParams changed = bench;
    changed.nu = 1.04;
    const SteadyState target = solve_closed_form(changed);
    const TransitionPath path = solve_transition(changed, ss.K, 200);
    CHECK(rel(path.k.back(), target.K) < 1e-8);
    CHECK(path.max_euler_residual() < 1e-9);

    // u, N jump to their new constants immediately and stay there
    for (const auto& b : path.blocks) {
        CHECK(std::abs(b.u - target.u) < 1e-12);
        CHECK(std::abs(b.N - target.N) < 1e-12);
    }
}

TEST_CASE("slow convergence triggers automatic horizon doubling") {
    ModelParams sluggish = bench;
    sluggish.sigma = 5.0;
    const TransitionPath path = solve_transition(sluggish, 0.9 * solve_closed_form(sluggish).K, 200);
    CHECK(path.horizon >= 400);
    CHECK(path.max_euler_residual() < 1e-9);
}

TEST_CASE("horizon-too-short error when doubling is exhausted") {
    TransitionOptions opt;
    opt.max_doublings = 0;
    CHECK_THROWS_AS(solve_transition(bench, 0.9 * ss.K, 4, opt), horizon_too_short_error);
}

TEST_CASE("input validation") {
    CHECK_THROWS_AS(solve_transition(bench, -1.0, 100), malformed_input_error);
    CHECK_THROWS_AS(solve_transition(bench, ss.K, 1), malformed_input_error);
    CHECK_THROWS_AS(per_period_block(0.0, bench), malformed_input_error);
}

TEST_CASE("csv serialisation covers every period") {
    const TransitionPath path = solve_transition(bench, 0.95 * ss.K, 16);
    CHECK(transition_csv_header().rfind("t,K,C,Y", 0) == 0);
    const std::string row0 = transition_csv_row(0, path);
    CHECK(row0.substr(0, 2) == "0,");
    const std::string last = transition_csv_row(path.horizon, path);
    CHECK(last.find("nan") != std::string::npos);  // residuals undefined at T
}
