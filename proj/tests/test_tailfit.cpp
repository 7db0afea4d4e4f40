#include <cmath>
#include <stdexcept>
#include <vector>

#include <doctest.h>

#include "volmix/tailfit.hpp"

using namespace volmix;

namespace {

// Deterministic Pareto sample via inverse CDF on the midpoint quantile grid:
// x = x_min (1-u)^(-1/(alpha-1)) reproduces the population law essentially
// exactly, so the estimator's own error dominates any sampling noise.
std::vector<double> pareto_quantile_grid(double alpha, double x_min, std::size_t n) {
    std::vector<double> xs(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double u = (static_cast<double>(i) + 0.5) / static_cast<double>(n);
        xs[i] = x_min * std::pow(1.0 - u, -1.0 / (alpha - 1.0));
    }
    return xs;
}

}  // namespace

TEST_CASE("the tail exponent estimator matches its closed form at a forced cutoff") {
    // Samples {1, e, e^2, e^3} with x_min = 1: sum of log ratios is 6, so
    // alpha_hat = 1 + 4/6 = 5/3.
    const std::vector<double> xs = {1.0, std::exp(1.0), std::exp(2.0), std::exp(3.0)};
    PowerLawOptions opt;
    opt.min_samples = 1;
    opt.forced_x_min = 1.0;
    const PowerLawFit fit = fit_power_law(xs, opt);
    CHECK(fit.alpha == doctest::Approx(5.0 / 3.0).epsilon(1e-14));
    CHECK(fit.x_min == 1.0);
    CHECK(fit.tail_size == 4);
}

TEST_CASE("the cutoff scan recovers a clean power law from its first sample") {
    const auto xs = pareto_quantile_grid(3.5, 2.0, 5000);
    const PowerLawFit fit = fit_power_law(xs);
    CHECK(fit.alpha == doctest::Approx(3.5).epsilon(0.015));
    // A quantile grid is power-law everywhere, so the scan keeps essentially
    // the whole sample.
    CHECK(fit.x_min < 2.2);
    CHECK(fit.tail_size > 4000);
    CHECK(fit.ks_distance < 0.01);
}

TEST_CASE("repeated fits are bit-for-bit reproducible") {
    const auto xs = pareto_quantile_grid(3.0, 1.0, 3000);
    const PowerLawFit a = fit_power_law(xs);
    const PowerLawFit b = fit_power_law(xs);
    CHECK(a.alpha == b.alpha);
    CHECK(a.x_min == b.x_min);
    CHECK(a.ks_distance == b.ks_distance);
    CHECK(a.tail_size == b.tail_size);
}

TEST_CASE("exponential data do not pass for a power law") {
    // Exp(1) quantile grid: the scan has to retreat into the far tail and
    // still fits worse than a genuine power law does.
    std::vector<double> xs(5000);
    for (std::size_t i = 0; i < xs.size(); ++i) {
        const double u = (static_cast<double>(i) + 0.5) / 5000.0;
        xs[i] = -std::log(1.0 - u);
    }
    const PowerLawFit fit = fit_power_law(xs);
    const PowerLawFit clean = fit_power_law(pareto_quantile_grid(3.5, 2.0, 5000));
    CHECK(fit.ks_distance > 3.0 * clean.ks_distance);
    CHECK(fit.x_min > 0.69);  // beyond the median of Exp(1)
}

TEST_CASE("power-law fit preconditions") {
    const std::vector<double> few(100, 1.5);
    CHECK_THROWS_AS((void)fit_power_law(few), std::invalid_argument);

    PowerLawOptions opt;
    opt.min_samples = 10;
    opt.min_tail_size = 5;
    const std::vector<double> flat(600, 2.0);  // single distinct value: degenerate
    CHECK_THROWS_AS((void)fit_power_law(flat, opt), std::invalid_argument);

    std::vector<double> negative = pareto_quantile_grid(3.0, 1.0, 600);
    negative[0] = -1.0;
    CHECK_THROWS_AS((void)fit_power_law(negative), std::invalid_argument);
}

TEST_CASE("stretched-exponential fit round-trips exact synthetic densities") {
    const double c = 2.5e3, lambda = 61.38, beta = 0.1772;
    std::vector<double> sigma, density;
    for (int i = 0; i < 60; ++i) {
        const double s = 0.002 * std::pow(0.3 / 0.002, i / 59.0);
        sigma.push_back(s);
        density.push_back(c * std::exp(-lambda * std::pow(s, beta)));
    }
    const StretchedExpFit fit = fit_stretched_exponential(sigma, density);
    CHECK(fit.beta == doctest::Approx(beta).epsilon(1e-3));
    CHECK(fit.lambda == doctest::Approx(lambda).epsilon(1e-3));
    CHECK(fit.c == doctest::Approx(c).epsilon(1e-2));
    CHECK(fit.residual < 1e-6);
    CHECK(fit.bins_used == 60);
    CHECK(fit.fit_lo == doctest::Approx(0.002).epsilon(1e-12));
    CHECK(fit.fit_hi == doctest::Approx(0.3).epsilon(1e-12));
}

TEST_CASE("the density overload restricts the fit to the requested range") {
    const double c = 10.0, lambda = 5.0, beta = 0.5;
    Density d;
    d.scale = BinScale::logarithmic;
    for (int i = 0; i <= 40; ++i) d.edges.push_back(0.01 * std::pow(100.0, i / 40.0));
    for (int i = 0; i < 40; ++i) {
        const double s = std::sqrt(d.edges[i] * d.edges[i + 1]);
        d.centers.push_back(s);
        d.density.push_back(c * std::exp(-lambda * std::pow(s, beta)));
        d.counts.push_back(10);
    }
    d.total_count = 400;
    const StretchedExpFit fit = fit_stretched_exponential(d, 0.05, 0.5);
    CHECK(fit.beta == doctest::Approx(beta).epsilon(1e-3));
    CHECK(fit.lambda == doctest::Approx(lambda).epsilon(1e-3));
    CHECK(fit.fit_lo == 0.05);
    CHECK(fit.fit_hi == 0.5);
    // Only the bins inside [0.05, 0.5] participate.
    CHECK(fit.bins_used < 40);
}

TEST_CASE("a growing density cannot be a stretched exponential") {
    std::vector<double> sigma, density;
    for (int i = 0; i < 20; ++i) {
        const double s = 0.01 * (i + 1);
        sigma.push_back(s);
        density.push_back(std::exp(2.0 * s));  // increasing: lambda would be negative
    }
    CHECK_THROWS_AS((void)fit_stretched_exponential(sigma, density), std::runtime_error);
}

TEST_CASE("too few usable bins is an error") {
    const std::vector<double> sigma = {0.1, 0.2, 0.3};
    const std::vector<double> density = {1.0, 0.5, 0.2};
    CHECK_THROWS_AS((void)fit_stretched_exponential(sigma, density), std::invalid_argument);
}

TEST_CASE("tail slope reads an exact power law to rounding") {
    std::vector<double> x, d;
    for (int i = 0; i < 25; ++i) {
        const double xi = std::pow(10.0, i / 8.0);
        x.push_back(xi);
        d.push_back(7.3 * std::pow(xi, -3.5));
    }
    CHECK(tail_slope(x, d, x.front(), x.back()) == doctest::Approx(-3.5).epsilon(1e-10));
}

TEST_CASE("tail slope respects its range and bin minimum") {
    std::vector<double> x, d;
    for (int i = 0; i < 10; ++i) {
        x.push_back(1.0 + i);
        d.push_back(std::pow(1.0 + i, -2.0));
    }
    // Only 3 points inside [1, 3.5]: below the default minimum of 5.
    CHECK_THROWS_AS((void)tail_slope(x, d, 1.0, 3.5), std::invalid_argument);
    CHECK_NOTHROW((void)tail_slope(x, d, 1.0, 3.5, {}, 3));
}
