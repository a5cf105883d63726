#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "firmscale/numeric.hpp"
#include "firmscale/statics.hpp"
#include "support/test_util.hpp"

using namespace firmscale;
using firmscale::testing::rel;

TEST_CASE("overhead-cost elasticity of TFP") {
    SUBCASE("constant returns: the firm count drops out of allocation") {
        ModelParams p;
        p.nu = 1.0;
        const PhiElasticity e = dln_tfp_dln_phi(p);
        CHECK(e.allocative == 0.0);
        CHECK(rel(e.total, 0.75 / 6.5) < 1e-12);  // (1-alpha)/(theta(1-alpha)-1)
        CHECK(e.total == doctest::Approx(0.115385).epsilon(1e-5));
    }
    SUBCASE("benchmark value") {
        const ModelParams p;
        const PhiElasticity e = dln_tfp_dln_phi(p);
        CHECK(rel(e.total, 0.02 + 0.765 / 6.45) < 1e-12);
        CHECK(e.total == doctest::Approx(0.138605).epsilon(1e-5));
        CHECK(e.technical > 0.0);
    }
    SUBCASE("independent of the markup") {
        ModelParams lo;
        lo.mu = 1.21;
        ModelParams hi;
        hi.mu = 1.28;
        CHECK(std::abs(dln_tfp_dln_phi(lo).total - dln_tfp_dln_phi(hi).total) < 1e-10);
    }
    SUBCASE("matches finite differences of the full steady state") {
        const FdCheck c = fd_check(ModelParams{}, Axis::phi);
        CHECK(c.rel_err < 1e-6);
    }
    SUBCASE("allocative part is -(1-nu) at 20 random points") {
        std::mt19937_64 rng(41);
        for (int i = 0; i < 20; ++i) {
            const ModelParams p = firmscale::testing::random_valid_params(rng, 0.05, 0.8);
            const double fd = elasticity_fd(p, Axis::phi, 1);  // ln Omega component
            CHECK(std::abs(fd - (-(1.0 - p.nu))) < 1e-6);
        }
    }
}

TEST_CASE("entry-cost elasticities") {
    const ModelParams p;
    const KappaElasticity e = dln_dkappa(p);
    SUBCASE("allocative efficiency does not move") {
        CHECK(e.allocative == 0.0);
        // omega is computed without reference to kappa: bit-identical across kappa
        ModelParams a = p, b = p;
        a.kappa = 0.010;
        b.kappa = 0.016;
        CHECK(derived_constants(a).omega == derived_constants(b).omega);
        const double fd_omega = elasticity_fd(p, Axis::kappa, 1);
        CHECK(std::abs(fd_omega) < 1e-10);
    }
    SUBCASE("selection weakens: technical efficiency falls") {
        CHECK(e.technical < 0.0);
        const double fd_ahat = elasticity_fd(p, Axis::kappa, 2);
        CHECK(rel(e.technical, fd_ahat) < 1e-6);
        CHECK(fd_check(p, Axis::kappa).rel_err < 1e-6);
    }
}

TEST_CASE("decomposition additivity") {
    std::mt19937_64 rng(42);
    for (int i = 0; i < 20; ++i) {
        const ModelParams p = firmscale::testing::random_valid_params(rng);
        const TFPDecomposition d = decompose(p);
        CHECK(std::abs(d.ln_tfp - (d.ln_omega + d.ln_ahat)) < 1e-12);
        CHECK(std::abs(d.ln_ahat - (d.ln_gamma + d.ln_abar)) < 1e-12);
    }
}

namespace {

ModelParams quant_params(double nu, double mu) {
    ModelParams p;
    p.nu = nu;
    p.mu = mu;
    p.phi = 0.135;
    return p;
}

double min_kappa_over(const std::vector<double>& nus, const std::vector<double>& mus) {
    double bound = 1e300;
    for (double nu : nus)
        for (double mu : mus) bound = std::min(bound, kappa_max(quant_params(nu, mu)));
    return bound;
}

}  // namespace

TEST_CASE("nu sweep: TFP rises monotonically in the low-markup economy") {
    const auto grid = linspace(0.99, 1.05, 13);
    ModelParams base = quant_params(1.02, 1.21);
    base.kappa = min_kappa_over({grid.begin(), grid.end()}, {1.21});
    const auto rows = sweep(base, Axis::nu, grid);
    REQUIRE(rows.size() == grid.size());
    for (std::size_t i = 0; i < rows.size(); ++i) {
        CHECK(rows[i].valid);
        if (i > 0) CHECK(rows[i].decomp.ln_tfp > rows[i - 1].decomp.ln_tfp);
    }
}

TEST_CASE("nu sweep: level and slope of ln TFP fall with the markup") {
    const auto grid = linspace(0.99, 1.05, 7);
    const double kappa = min_kappa_over({grid.begin(), grid.end()}, {1.21, 1.28});
    ModelParams lo = quant_params(1.02, 1.21);
    lo.kappa = kappa;
    ModelParams hi = quant_params(1.02, 1.28);
    hi.kappa = kappa;
    const auto rows_lo = sweep(lo, Axis::nu, grid);
    const auto rows_hi = sweep(hi, Axis::nu, grid);
    for (std::size_t i = 0; i < grid.size(); ++i)
        CHECK(rows_hi[i].decomp.ln_tfp < rows_lo[i].decomp.ln_tfp);
    const double slope_lo = rows_lo.back().decomp.ln_tfp - rows_lo.front().decomp.ln_tfp;
    const double slope_hi = rows_hi.back().decomp.ln_tfp - rows_hi.front().decomp.ln_tfp;
    CHECK(slope_hi < slope_lo);
}

TEST_CASE("nu sweep: allocative efficiency is U-shaped and its trough moves right with the markup") {
    const auto grid = linspace(0.85, 1.05, 41);
    const double kappa = min_kappa_over({grid.begin(), grid.end()}, {1.21, 1.28});
    auto argmin_omega = [&](double mu) {
        ModelParams base = quant_params(1.02, mu);
        base.kappa = kappa;
        const auto rows = sweep(base, Axis::nu, grid);
        std::size_t best = 0;
        for (std::size_t i = 1; i < rows.size(); ++i)
            if (rows[i].decomp.ln_omega < rows[best].decomp.ln_omega) best = i;
        // U shape: falling before the trough, rising after
        for (std::size_t i = 1; i <= best; ++i)
            CHECK(rows[i].decomp.ln_omega < rows[i - 1].decomp.ln_omega);
        for (std::size_t i = best + 2; i < rows.size(); ++i)
            CHECK(rows[i].decomp.ln_omega > rows[i - 1].decomp.ln_omega);
        return best;
    };
    const std::size_t trough_lo = argmin_omega(1.21);
    const std::size_t trough_hi = argmin_omega(1.28);
    CHECK(trough_lo > 0);
    CHECK(trough_hi < grid.size() - 1);
    CHECK(trough_hi > trough_lo);

    // technical efficiency rises with nu throughout
    ModelParams base = quant_params(1.02, 1.21);
    base.kappa = kappa;
    const auto rows = sweep(base, Axis::nu, grid);
    for (std::size_t i = 1; i < rows.size(); ++i)
        CHECK(rows[i].decomp.ln_ahat > rows[i - 1].decomp.ln_ahat);
}

TEST_CASE("phi sweep at constant returns leaves allocation flat") {
    ModelParams base;
    base.nu = 1.0;
    base.kappa = 0.01;
    const auto grid = linspace(0.4, 1.2, 9);
    const auto rows = sweep(base, Axis::phi, grid);
    for (const auto& row : rows) {
        REQUIRE(row.valid);
        CHECK(std::abs(row.decomp.ln_omega - rows.front().decomp.ln_omega) < 1e-12);
    }
}

TEST_CASE("invalid grid points are flagged rows, never dropped") {
    ModelParams base;
    const auto grid = linspace(1.0, 1.6, 7);  // nu crosses mu = 1.245
    const auto rows = sweep(base, Axis::nu, grid);
    REQUIRE(rows.size() == grid.size());
    bool saw_invalid = false;
    for (const auto& row : rows) {
        if (!row.valid) {
            saw_invalid = true;
            CHECK(std::isnan(row.decomp.ln_tfp));
        }
    }
    CHECK(saw_invalid);
    CHECK(rows.front().valid);
}

TEST_CASE("sweeps are deterministic under parallel evaluation") {
    ModelParams base;
    base.kappa = 0.01;
    const auto grid = linspace(0.3, 1.4, 23);
    const auto serial = sweep(base, Axis::phi, grid, 1);
    const auto parallel = sweep(base, Axis::phi, grid, 8);
    for (std::size_t i = 0; i < grid.size(); ++i) {
        CHECK(sweep_csv_row(serial[i]) == sweep_csv_row(parallel[i]));
    }
}

TEST_CASE("five-point stencil handles the axis without a closed form") {
    const ModelParams p;
    // no closed form on the nu axis; the stencil is the primary value there
    const double e5 = elasticity_fd5(p, Axis::nu);
    const double e2 = elasticity_fd(p, Axis::nu, 0, 1e-5);
    CHECK(rel(e5, e2) < 1e-5);
    CHECK_THROWS_AS(fd_check(p, Axis::nu), malformed_input_error);
}

TEST_CASE("fd_check shrinks its step near the validity boundary") {
    ModelParams p;
    p.kappa = kappa_max(p) * std::exp(-2e-3);  // a 1e-2 step exits the region, 1e-3 does not
    const FdCheck c = fd_check(p, Axis::kappa, 1e-2);
    CHECK(c.rel_err < 1e-6);

    // at the boundary itself every upward step is invalid: retries exhaust
    p.kappa = kappa_max(p);
    CHECK_THROWS_AS(fd_check(p, Axis::kappa, 1e-2), calibration_error);
}

TEST_CASE("sweep csv schema") {
    CHECK(sweep_csv_header() == "axis_value,valid,ln_tfp,ln_omega,ln_ahat,ln_abar,J,N,u,s_l");
}
