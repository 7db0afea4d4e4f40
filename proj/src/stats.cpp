#include "volmix/stats.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace volmix {

double mean(std::span<const double> xs) {
    if (xs.empty()) throw std::invalid_argument("mean: empty sample");
    double s = 0.0;
    for (double x : xs) s += x;
    return s / static_cast<double>(xs.size());
}

double sample_variance(std::span<const double> xs) {
    if (xs.size() < 2) throw std::invalid_argument("sample_variance: need at least 2 samples");
    const double m = mean(xs);
    double s = 0.0;
    for (double x : xs) s += (x - m) * (x - m);
    return s / static_cast<double>(xs.size() - 1);
}

double sample_stddev(std::span<const double> xs) { return std::sqrt(sample_variance(xs)); }

double sample_skewness(std::span<const double> xs) {
    if (xs.size() < 3) throw std::invalid_argument("sample_skewness: need at least 3 samples");
    const double m = mean(xs);
    double m2 = 0.0, m3 = 0.0;
    for (double x : xs) {
        const double d = x - m;
        m2 += d * d;
        m3 += d * d * d;
    }
    const double n = static_cast<double>(xs.size());
    m2 /= n;
    m3 /= n;
    if (m2 <= 0.0) throw std::invalid_argument("sample_skewness: zero variance");
    return m3 / (m2 * std::sqrt(m2));
}

double quantile_sorted(std::span<const double> sorted, double q) {
    if (sorted.empty()) throw std::invalid_argument("quantile_sorted: empty sample");
    if (!(q >= 0.0 && q <= 1.0)) throw std::invalid_argument("quantile_sorted: q outside [0, 1]");
    const double h = q * static_cast<double>(sorted.size() - 1);
    const std::size_t lo = static_cast<std::size_t>(h);
    if (lo + 1 >= sorted.size()) return sorted.back();
    const double frac = h - static_cast<double>(lo);
    return sorted[lo] + frac * (sorted[lo + 1] - sorted[lo]);
}

double ks_two_sample_sorted(std::span<const double> a, std::span<const double> b) {
    if (a.empty() || b.empty()) throw std::invalid_argument("ks_two_sample: empty sample");
    const double na = static_cast<double>(a.size());
    const double nb = static_cast<double>(b.size());
    std::size_t i = 0, j = 0;
    double d = 0.0;
    // Merge walk; ties are consumed from both sides before the ECDFs are
    // compared, so equal values never produce a spurious gap.
    while (i < a.size() && j < b.size()) {
        const double x = std::min(a[i], b[j]);
        while (i < a.size() && a[i] == x) ++i;
        while (j < b.size() && b[j] == x) ++j;
        d = std::max(d, std::abs(static_cast<double>(i) / na - static_cast<double>(j) / nb));
    }
    return d;
}

double ks_two_sample(std::vector<double> a, std::vector<double> b) {
    std::sort(a.begin(), a.end());
    std::sort(b.begin(), b.end());
    return ks_two_sample_sorted(a, b);
}

LinearFit weighted_linear_fit(std::span<const double> x, std::span<const double> y,
                              std::span<const double> w) {
    if (x.size() != y.size() || (!w.empty() && w.size() != x.size()))
        throw std::invalid_argument("weighted_linear_fit: length mismatch");
    if (x.size() < 2) throw std::invalid_argument("weighted_linear_fit: need at least 2 points");
    double sw = 0.0, swx = 0.0, swy = 0.0, swxx = 0.0, swxy = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double wi = w.empty() ? 1.0 : w[i];
        sw += wi;
        swx += wi * x[i];
        swy += wi * y[i];
        swxx += wi * x[i] * x[i];
        swxy += wi * x[i] * y[i];
    }
    const double denom = sw * swxx - swx * swx;
    if (denom == 0.0 || sw == 0.0)
        throw std::invalid_argument("weighted_linear_fit: degenerate abscissae");
    LinearFit fit;
    fit.slope = (sw * swxy - swx * swy) / denom;
    fit.intercept = (swy - fit.slope * swx) / sw;
    return fit;
}

}  // namespace volmix
