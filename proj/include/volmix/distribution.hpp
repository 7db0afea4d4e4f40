#pragma once

#include <cstddef>
#include <limits>
#include <vector>

namespace volmix {

enum class BinScale {
    uniform,      // equal-width bins over [lo, hi], signed data
    logarithmic,  // log-spaced bins over |x|; an underflow bucket catches |x| < lo
};

struct DensityOptions {
    BinScale scale = BinScale::logarithmic;
    std::size_t bin_count = 60;
    // Bin range; for logarithmic bins these bound |x| and lo must be > 0.
    // NaN means "derive from the data" (min/max, or smallest nonzero |x|).
    double lo = std::numeric_limits<double>::quiet_NaN();
    double hi = std::numeric_limits<double>::quiet_NaN();
};

/// Histogram density estimate: density[i] = count[i] / (N * width[i]).
/// For logarithmic bins the data are folded to |x| and underflow_count
/// records samples below the first edge; out-of-range samples above hi are
/// dropped (counted in overflow_count) but N always includes every sample,
/// so sum(density * width) + (underflow+overflow)/N == 1 within 1e-9.
struct Density {
    std::vector<double> edges;    // bin_count + 1 ascending edges
    std::vector<double> centers;  // geometric centers for log bins, arithmetic otherwise
    std::vector<double> density;
    std::vector<std::size_t> counts;
    std::size_t underflow_count = 0;
    std::size_t overflow_count = 0;
    std::size_t total_count = 0;
    BinScale scale = BinScale::logarithmic;
};

Density empirical_density(const std::vector<double>& values, const DensityOptions& options = {});

/// Diffusive rescaling: z = r / sqrt(n). Used to overlay return
/// distributions taken at different aggregation scales n.
std::vector<double> rescale_returns(const std::vector<double>& returns, std::size_t n);

/// Pairwise two-sample Kolmogorov-Smirnov distances between rescaled return
/// samples. Result is a symmetric k x k matrix (flattened row-major) with a
/// zero diagonal; max_distance is the largest off-diagonal entry.
struct CollapseReport {
    std::vector<std::size_t> scales;
    std::vector<double> pairwise_distance;  // k*k, row-major
    double max_distance = 0.0;
};

/// Requires >= 2 scales with >= 1000 samples each (throws otherwise); the
/// inputs are the already-rescaled samples, one vector per scale.
CollapseReport collapse_metric(const std::vector<std::vector<double>>& rescaled_samples,
                               const std::vector<std::size_t>& scales);

}  // namespace volmix
