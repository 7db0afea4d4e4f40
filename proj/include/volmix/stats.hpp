#pragma once

#include <algorithm>
#include <cstddef>
#include <span>
#include <vector>

namespace volmix {

double mean(std::span<const double> xs);

// Sample variance, divisor (count - 1). Requires at least 2 elements.
double sample_variance(std::span<const double> xs);
double sample_stddev(std::span<const double> xs);

// g1 = m3 / m2^{3/2} with central moments over the sample.
double sample_skewness(std::span<const double> xs);

// Linear-interpolation quantile on a sorted ascending sample, q in [0, 1].
double quantile_sorted(std::span<const double> sorted, double q);

// Two-sample Kolmogorov statistic sup|F_a - F_b|. Inputs need not be sorted.
double ks_two_sample(std::vector<double> a, std::vector<double> b);
// Same, on already-sorted ascending samples (no copies).
double ks_two_sample_sorted(std::span<const double> a, std::span<const double> b);

// One-sample Kolmogorov statistic of a sorted ascending sample against a CDF.
template <class Cdf>
double ks_one_sample_sorted(std::span<const double> sorted, Cdf&& cdf) {
    const double m = static_cast<double>(sorted.size());
    double d = 0.0;
    for (std::size_t j = 0; j < sorted.size(); ++j) {
        const double f = cdf(sorted[j]);
        const double lo = static_cast<double>(j) / m;
        const double hi = static_cast<double>(j + 1) / m;
        d = std::max(d, std::max(f - lo, hi - f));
    }
    return d;
}

struct LinearFit {
    double slope = 0.0;
    double intercept = 0.0;
};

// Weighted least squares of y on x; w may be empty for uniform weights.
LinearFit weighted_linear_fit(std::span<const double> x, std::span<const double> y,
                              std::span<const double> w = {});

// Golden-section minimum of f on [a, b] to absolute tolerance tol in x.
template <class F>
double golden_section_minimize(F&& f, double a, double b, double tol) {
    constexpr double invphi = 0.6180339887498949;
    double x1 = b - invphi * (b - a);
    double x2 = a + invphi * (b - a);
    double f1 = f(x1), f2 = f(x2);
    while (b - a > tol) {
        if (f1 <= f2) {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - invphi * (b - a);
            f1 = f(x1);
        } else {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + invphi * (b - a);
            f2 = f(x2);
        }
    }
    return 0.5 * (a + b);
}

}  // namespace volmix
