#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>

#include "firmscale/numeric.hpp"
#include "firmscale/pareto.hpp"
#include "support/test_util.hpp"

using namespace firmscale;
using firmscale::testing::rel;

TEST_CASE("quantile function") {
    CHECK(pareto_quantile(0.0, 10.0) == 1.0);
    CHECK(rel(pareto_quantile(0.9, 10.0), std::pow(10.0, 0.1)) < 1e-15);
    // thick-tail shape used in the industry-calibration literature
    CHECK(rel(pareto_quantile(0.99, 1.15), std::pow(100.0, 1.0 / 1.15)) < 1e-15);
    CHECK_THROWS_AS(pareto_quantile(1.0, 10.0), malformed_input_error);
    CHECK_THROWS_AS(pareto_quantile(-0.1, 10.0), malformed_input_error);

    // strictly increasing
    double prev = 0.0;
    for (double j : {0.0, 0.1, 0.5, 0.9, 0.999}) {
        const double a = pareto_quantile(j, 10.0);
        CHECK(a > prev);
        prev = a;
    }
}

TEST_CASE("cdf and quantile round trip") {
    for (double j : {0.0, 0.5, 0.9, 0.999})
        CHECK(std::abs(pareto_cdf(pareto_quantile(j, 10.0), 10.0) - j) < 1e-14);
}

TEST_CASE("power mean: closed form equals quadrature") {
    SUBCASE("benchmark, no selection") {
        const ModelParams p;
        CHECK(power_mean_closed(0.0, p) == doctest::Approx(1.14140).epsilon(1e-5));
        CHECK(rel(power_mean_closed(0.0, p), power_mean_quadrature(0.0, p)) < 1e-10);
    }
    SUBCASE("20 random cutoff/parameter tuples") {
        std::mt19937_64 rng(11);
        std::uniform_real_distribution<double> unif(0.0, 1.0);
        for (int i = 0; i < 20; ++i) {
            const ModelParams p = firmscale::testing::random_valid_params(rng);
            const double cutoff = 0.95 * unif(rng);
            CHECK(rel(power_mean_closed(cutoff, p), power_mean_quadrature(cutoff, p)) < 1e-10);
        }
    }
    SUBCASE("the ratio to the cutoff level is constant in the cutoff") {
        const ModelParams p;
        const double g = gamma_closed_form(p);
        for (double j : {0.0, 0.3, 0.77, 0.99}) {
            const double abar = pareto_quantile(j, p.theta);
            CHECK(rel(power_mean_closed(j, p) / abar, g) < 1e-14);
        }
    }
}

TEST_CASE("divergent scaled moment is refused") {
    ModelParams p;
    p.theta = 1.0 / (p.mu - p.nu);  // theta(mu-nu) = 1 exactly
    CHECK_THROWS_AS(gamma_closed_form(p), divergent_moment_error);
    CHECK_THROWS_AS(power_mean_quadrature(0.0, p), divergent_moment_error);
}

TEST_CASE("panel sampling") {
    const ModelParams p;
    SUBCASE("deterministic given the seed") {
        const auto a = sample_panel(5000, 123, p, 1.2);
        const auto b = sample_panel(5000, 123, p, 1.2);
        REQUIRE(a.size() == b.size());
        for (std::size_t i = 0; i < a.size(); ++i) {
            CHECK(a[i].j == b[i].j);
            CHECK(a[i].a == b[i].a);
        }
        const auto c = sample_panel(5000, 124, p, 1.2);
        bool any_diff = false;
        for (std::size_t i = 0; i < a.size(); ++i) any_diff |= a[i].j != c[i].j;
        CHECK(any_diff);
    }
    SUBCASE("parallel sampling reproduces the serial stream") {
        const auto serial = sample_panel(20000, 9, p, 1.0, 1);
        const auto parallel = sample_panel(20000, 9, p, 1.0, 7);
        for (std::size_t i = 0; i < serial.size(); ++i) CHECK(serial[i].a == parallel[i].a);
    }
    SUBCASE("cutoff at the minimum draw keeps every firm active") {
        const auto panel = sample_panel(1000, 5, p, 1.0);
        CHECK(std::all_of(panel.begin(), panel.end(), [](const TechDraw& d) { return d.active; }));
    }
    SUBCASE("draws never reach j = 1") {
        const auto panel = sample_panel(100000, 17, p, 1.0);
        for (const auto& d : panel) {
            CHECK(d.j <= 1.0 - 0x1.0p-53);
            CHECK(std::isfinite(d.a));
        }
    }
}

TEST_CASE("empirical power mean converges to the quadrature oracle") {
    const ModelParams p;
    const std::size_t n = 1000000;
    const auto panel = sample_panel(n, 42, p, 1.0, 4);
    const double inv_exp = 1.0 / (p.mu - p.nu);

    // Monte Carlo standard error of the scaled-technology mean
    std::vector<double> scaled(panel.size());
    for (std::size_t i = 0; i < panel.size(); ++i) scaled[i] = std::pow(panel[i].a, inv_exp);
    const double mean = pairwise_sum(scaled) / static_cast<double>(n);
    double var = 0.0;
    for (double v : scaled) var += (v - mean) * (v - mean);
    var /= static_cast<double>(n - 1);
    const double se = std::sqrt(var / static_cast<double>(n));

    const double target_mean = std::pow(power_mean_quadrature(0.0, p), inv_exp);
    CHECK(std::abs(mean - target_mean) < 3.0 * se);
    CHECK(rel(empirical_power_mean(panel, p), std::pow(mean, p.mu - p.nu)) < 1e-12);
}

TEST_CASE("scaled technology is Pareto with shape theta*(mu-nu)") {
    const ModelParams p;
    const double shape = p.theta_mu_nu();
    const std::size_t n = 500000;
    const auto panel = sample_panel(n, 777, p, 1.0, 4);

    std::vector<double> scaled(panel.size());
    for (std::size_t i = 0; i < panel.size(); ++i)
        scaled[i] = std::pow(panel[i].a, 1.0 / (p.mu - p.nu));

    // mean matches shape/(shape-1) within 3 standard errors
    const double mean = pairwise_sum(scaled) / static_cast<double>(n);
    double var = 0.0;
    for (double v : scaled) var += (v - mean) * (v - mean);
    var /= static_cast<double>(n - 1);
    const double se = std::sqrt(var / static_cast<double>(n));
    CHECK(std::abs(mean - shape / (shape - 1.0)) < 3.0 * se);

    // median matches 2^(1/shape)
    std::nth_element(scaled.begin(), scaled.begin() + n / 2, scaled.end());
    const double median = scaled[n / 2];
    CHECK(rel(median, std::pow(2.0, 1.0 / shape)) < 5e-3);
}
