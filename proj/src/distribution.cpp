#include "volmix/distribution.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "volmix/stats.hpp"

namespace volmix {

Density empirical_density(const std::vector<double>& values, const DensityOptions& options) {
    if (values.size() < 100)
        throw std::invalid_argument("empirical_density: need at least 100 samples");
    if (options.bin_count < 2) throw std::invalid_argument("empirical_density: bin_count < 2");

    const bool log_bins = options.scale == BinScale::logarithmic;
    double lo = options.lo, hi = options.hi;
    if (log_bins) {
        if (std::isnan(lo)) {
            lo = std::numeric_limits<double>::infinity();
            for (double v : values) {
                const double a = std::abs(v);
                if (a > 0.0 && a < lo) lo = a;
            }
            if (!std::isfinite(lo))
                throw std::invalid_argument("empirical_density: all values zero");
        }
        if (std::isnan(hi)) {
            hi = 0.0;
            for (double v : values) hi = std::max(hi, std::abs(v));
        }
        if (!(lo > 0.0) || !(hi > lo))
            throw std::invalid_argument("empirical_density: degenerate log-bin range");
    } else {
        if (std::isnan(lo)) lo = *std::min_element(values.begin(), values.end());
        if (std::isnan(hi)) hi = *std::max_element(values.begin(), values.end());
        if (!(hi > lo)) throw std::invalid_argument("empirical_density: degenerate range");
    }

    Density d;
    d.scale = options.scale;
    const std::size_t nbins = options.bin_count;
    d.edges.resize(nbins + 1);
    const double log_lo = log_bins ? std::log(lo) : 0.0;
    const double log_span = log_bins ? std::log(hi) - std::log(lo) : 0.0;
    for (std::size_t i = 0; i <= nbins; ++i) {
        const double f = static_cast<double>(i) / static_cast<double>(nbins);
        d.edges[i] = log_bins ? std::exp(log_lo + f * log_span) : lo + f * (hi - lo);
    }
    d.edges.front() = lo;  // exact endpoints, no exp/log round trip error
    d.edges.back() = hi;

    d.counts.assign(nbins, 0);
    for (double v : values) {
        const double x = log_bins ? std::abs(v) : v;
        if (x < lo) {
            ++d.underflow_count;
            continue;
        }
        if (x > hi) {
            ++d.overflow_count;
            continue;
        }
        double pos = log_bins ? std::log(x / lo) / log_span * static_cast<double>(nbins)
                              : (x - lo) / (hi - lo) * static_cast<double>(nbins);
        std::size_t idx = pos >= 0.0 ? static_cast<std::size_t>(pos) : 0;
        if (idx >= nbins) idx = nbins - 1;  // x == hi (or fp spill) goes to the top bin
        // fp round-off near an edge can land one bin off; nudge back inside.
        while (idx > 0 && x < d.edges[idx]) --idx;
        while (idx + 1 < nbins && x >= d.edges[idx + 1]) ++idx;
        ++d.counts[idx];
    }

    d.total_count = values.size();
    d.centers.resize(nbins);
    d.density.resize(nbins);
    const double n = static_cast<double>(d.total_count);
    for (std::size_t i = 0; i < nbins; ++i) {
        const double w = d.edges[i + 1] - d.edges[i];
        d.centers[i] = log_bins ? std::sqrt(d.edges[i] * d.edges[i + 1])
                                : 0.5 * (d.edges[i] + d.edges[i + 1]);
        d.density[i] = static_cast<double>(d.counts[i]) / (n * w);
    }
    return d;
}

std::vector<double> rescale_returns(const std::vector<double>& returns, std::size_t n) {
    if (n == 0) throw std::invalid_argument("rescale_returns: n must be >= 1");
    if (n == 1) return returns;
    const double s = 1.0 / std::sqrt(static_cast<double>(n));
    std::vector<double> out(returns.size());
    for (std::size_t i = 0; i < returns.size(); ++i) out[i] = returns[i] * s;
    return out;
}

CollapseReport collapse_metric(const std::vector<std::vector<double>>& rescaled_samples,
                               const std::vector<std::size_t>& scales) {
    const std::size_t k = rescaled_samples.size();
    if (k < 2) throw std::invalid_argument("collapse_metric: need at least 2 scales");
    if (scales.size() != k) throw std::invalid_argument("collapse_metric: scale count mismatch");
    for (const auto& s : rescaled_samples)
        if (s.size() < 1000)
            throw std::invalid_argument("collapse_metric: need >= 1000 samples per scale");

    std::vector<std::vector<double>> sorted(k);
    for (std::size_t i = 0; i < k; ++i) {
        sorted[i] = rescaled_samples[i];
        std::sort(sorted[i].begin(), sorted[i].end());
    }

    CollapseReport report;
    report.scales = scales;
    report.pairwise_distance.assign(k * k, 0.0);
    for (std::size_t i = 0; i < k; ++i) {
        for (std::size_t j = i + 1; j < k; ++j) {
            const double dist = ks_two_sample_sorted(sorted[i], sorted[j]);
            report.pairwise_distance[i * k + j] = dist;
            report.pairwise_distance[j * k + i] = dist;
            report.max_distance = std::max(report.max_distance, dist);
        }
    }
    return report;
}

}  // namespace volmix
