#pragma once

#include <cstddef>
#include <limits>
#include <vector>

#include "volmix/distribution.hpp"

namespace volmix {

/// Continuous power-law fit p(x) ~ x^-alpha for x >= x_min.
/// alpha_hat = 1 + m / sum(log(x_i / x_min)) over the m tail samples; x_min
/// is chosen from the distinct sample values to minimize the one-sample KS
/// distance between the tail and the fitted CDF (ties break toward the
/// smaller x_min).
struct PowerLawFit {
    double alpha = 0.0;
    double x_min = 0.0;
    double ks_distance = 0.0;
    std::size_t tail_size = 0;
};

struct PowerLawOptions {
    std::size_t min_samples = 500;   // required input size
    std::size_t min_tail_size = 50;  // candidates leaving fewer tail samples are skipped
    // Cap on distinct x_min candidates scanned; larger sets are rank-
    // subsampled evenly. Keeps the scan O(cap * n) after one sort.
    std::size_t max_candidates = 2000;
    // Fix x_min instead of scanning (NaN = scan).
    double forced_x_min = std::numeric_limits<double>::quiet_NaN();
};

PowerLawFit fit_power_law(const std::vector<double>& values, const PowerLawOptions& options = {});

/// Weighted least squares of log d_i = log(c) - lambda * sigma_i^beta over
/// the bins of a density estimate (weights = bin counts). beta is located on
/// [beta_lo, beta_hi] by golden section after a coarse grid pre-scan picks
/// the bracket; (log c, lambda) come from the weighted linear fit at each
/// beta.
struct StretchedExpFit {
    double c = 0.0;  // amplitude, exp(log_c)
    double lambda = 0.0;
    double beta = 0.0;
    double log_c = 0.0;
    double fit_lo = 0.0;
    double fit_hi = 0.0;
    double residual = 0.0;  // weighted SSE of log densities at the optimum
    std::size_t bins_used = 0;
};

struct StretchedExpOptions {
    double beta_lo = 0.02;
    double beta_hi = 1.0;
    double beta_tol = 1e-4;
    std::size_t grid_points = 64;    // coarse pre-scan resolution
    std::size_t min_bins = 8;        // nonempty bins required inside the range
};

/// Core fit on raw (sigma, density, weight) triples; zero-density points are
/// ignored. Throws when fewer than options.min_bins usable points remain.
StretchedExpFit fit_stretched_exponential(const std::vector<double>& sigma,
                                          const std::vector<double>& density,
                                          const std::vector<double>& weights = {},
                                          const StretchedExpOptions& options = {});

/// Fit over a density estimate's bin centers restricted to [fit_lo, fit_hi],
/// weighted by bin counts.
StretchedExpFit fit_stretched_exponential(const Density& dist, double fit_lo, double fit_hi,
                                          const StretchedExpOptions& options = {});

/// Log-log slope of a density estimate over [x_lo, x_hi] via weighted linear
/// regression on (log x, log d); a power-law tail x^-alpha gives slope
/// -alpha. Throws if fewer than min_bins positive-density points fall in
/// range (default 5).
double tail_slope(const std::vector<double>& x, const std::vector<double>& density,
                  double x_lo, double x_hi, const std::vector<double>& weights = {},
                  std::size_t min_bins = 5);
double tail_slope(const Density& dist, double x_lo, double x_hi, std::size_t min_bins = 5);

}  // namespace volmix
