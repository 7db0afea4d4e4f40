#include "volmix/tailfit.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "volmix/stats.hpp"

namespace volmix {

namespace {

// One-sample KS distance of the sorted tail sample against the fitted
// power-law CDF F(x) = 1 - (x/x_min)^(1-alpha).
double power_law_ks(std::span<const double> tail, double x_min, double alpha) {
    const double m = static_cast<double>(tail.size());
    double d = 0.0;
    for (std::size_t j = 0; j < tail.size(); ++j) {
        const double f = 1.0 - std::pow(tail[j] / x_min, 1.0 - alpha);
        d = std::max(d, std::max(f - static_cast<double>(j) / m,
                                 static_cast<double>(j + 1) / m - f));
    }
    return d;
}

}  // namespace

PowerLawFit fit_power_law(const std::vector<double>& values, const PowerLawOptions& options) {
    if (values.size() < options.min_samples)
        throw std::invalid_argument("fit_power_law: need at least " +
                                    std::to_string(options.min_samples) + " samples");
    std::vector<double> sorted = values;
    std::sort(sorted.begin(), sorted.end());
    if (!(sorted.front() > 0.0))
        throw std::invalid_argument("fit_power_law: samples must be positive");
    const std::size_t n = sorted.size();

    // Suffix sums of log x: tail log-sum for a candidate starting at i is
    // suffix[i] - m * log(x_min).
    std::vector<double> suffix(n + 1, 0.0);
    for (std::size_t i = n; i-- > 0;) suffix[i] = suffix[i + 1] + std::log(sorted[i]);

    const auto evaluate = [&](double x_min) -> PowerLawFit {
        const std::size_t i0 =
            static_cast<std::size_t>(std::lower_bound(sorted.begin(), sorted.end(), x_min) -
                                     sorted.begin());
        const std::size_t m = n - i0;
        PowerLawFit fit;
        fit.x_min = x_min;
        fit.tail_size = m;
        if (m < 2) return fit;  // alpha left 0: marker for "unusable"
        const double s = suffix[i0] - static_cast<double>(m) * std::log(x_min);
        // A mean log-ratio at rounding scale means every tail value equals
        // x_min (the subtraction leaves only accumulated float error): there
        // is no spread to fit an exponent to.
        if (!(s > static_cast<double>(m) * 1e-12 * (1.0 + std::abs(std::log(x_min)))))
            return fit;
        fit.alpha = 1.0 + static_cast<double>(m) / s;
        fit.ks_distance =
            power_law_ks(std::span<const double>(sorted).subspan(i0), x_min, fit.alpha);
        return fit;
    };

    if (!std::isnan(options.forced_x_min)) {
        PowerLawFit fit = evaluate(options.forced_x_min);
        if (fit.alpha == 0.0)
            throw std::invalid_argument("fit_power_law: degenerate tail at forced x_min");
        return fit;
    }

    std::vector<double> distinct;
    distinct.reserve(std::min<std::size_t>(n, options.max_candidates));
    std::vector<double> all_distinct(sorted);
    all_distinct.erase(std::unique(all_distinct.begin(), all_distinct.end()), all_distinct.end());
    if (all_distinct.size() <= options.max_candidates) {
        distinct = std::move(all_distinct);
    } else {
        // Evenly subsample in rank so the candidate set stays bounded and
        // deterministic regardless of sample size.
        const std::size_t cap = options.max_candidates;
        for (std::size_t t = 0; t < cap; ++t) {
            const std::size_t idx = t * (all_distinct.size() - 1) / (cap - 1);
            distinct.push_back(all_distinct[idx]);
        }
        distinct.erase(std::unique(distinct.begin(), distinct.end()), distinct.end());
    }

    PowerLawFit best;
    bool found = false;
    for (double candidate : distinct) {  // ascending: ties on KS keep the smaller x_min
        PowerLawFit fit = evaluate(candidate);
        if (fit.alpha == 0.0 || fit.tail_size < options.min_tail_size) continue;
        if (!found || fit.ks_distance < best.ks_distance) {
            best = fit;
            found = true;
        }
    }
    if (!found)
        throw std::invalid_argument(
            "fit_power_law: no usable x_min candidate (tail too thin or degenerate)");
    return best;
}

namespace {

struct StretchedPoints {
    std::vector<double> sigma_pow;  // scratch: sigma^beta, rebuilt per beta
    std::vector<double> sigma;
    std::vector<double> log_density;
    std::vector<double> weight;
};

// Weighted SSE of log density against log(c) - lambda * sigma^beta at the
// given beta, with (log c, lambda) profiled out by linear least squares.
double stretched_objective(StretchedPoints& pts, double beta, LinearFit* fit_out = nullptr) {
    pts.sigma_pow.resize(pts.sigma.size());
    for (std::size_t i = 0; i < pts.sigma.size(); ++i)
        pts.sigma_pow[i] = std::pow(pts.sigma[i], beta);
    const LinearFit fit = weighted_linear_fit(pts.sigma_pow, pts.log_density, pts.weight);
    if (fit_out) *fit_out = fit;
    double sse = 0.0;
    for (std::size_t i = 0; i < pts.sigma.size(); ++i) {
        const double r = pts.log_density[i] - (fit.intercept + fit.slope * pts.sigma_pow[i]);
        sse += pts.weight[i] * r * r;
    }
    return sse;
}

}  // namespace

StretchedExpFit fit_stretched_exponential(const std::vector<double>& sigma,
                                          const std::vector<double>& density,
                                          const std::vector<double>& weights,
                                          const StretchedExpOptions& options) {
    if (sigma.size() != density.size() || (!weights.empty() && weights.size() != sigma.size()))
        throw std::invalid_argument("fit_stretched_exponential: length mismatch");

    StretchedPoints pts;
    for (std::size_t i = 0; i < sigma.size(); ++i) {
        const double w = weights.empty() ? 1.0 : weights[i];
        if (!(sigma[i] > 0.0) || !(density[i] > 0.0) || !(w > 0.0)) continue;
        pts.sigma.push_back(sigma[i]);
        pts.log_density.push_back(std::log(density[i]));
        pts.weight.push_back(w);
    }
    if (pts.sigma.size() < options.min_bins)
        throw std::invalid_argument("fit_stretched_exponential: fewer than " +
                                    std::to_string(options.min_bins) + " usable bins");

    // Coarse grid locates the basin; golden section refines inside it. The
    // objective is smooth in beta but can be flat near 0, so the pre-scan
    // keeps the bracket honest.
    const double lo = options.beta_lo, hi = options.beta_hi;
    const std::size_t g = std::max<std::size_t>(options.grid_points, 4);
    double best_beta = lo;
    double best_val = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < g; ++i) {
        const double beta = lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(g - 1);
        const double val = stretched_objective(pts, beta);
        if (val < best_val) {
            best_val = val;
            best_beta = beta;
        }
    }
    const double step = (hi - lo) / static_cast<double>(g - 1);
    const double bracket_lo = std::max(lo, best_beta - step);
    const double bracket_hi = std::min(hi, best_beta + step);
    const double beta = golden_section_minimize(
        [&](double b) { return stretched_objective(pts, b); }, bracket_lo, bracket_hi,
        options.beta_tol);

    LinearFit lin;
    const double sse = stretched_objective(pts, beta, &lin);
    StretchedExpFit fit;
    fit.beta = beta;
    fit.lambda = -lin.slope;
    fit.log_c = lin.intercept;
    fit.c = std::exp(lin.intercept);
    fit.residual = sse;
    fit.bins_used = pts.sigma.size();
    fit.fit_lo = *std::min_element(pts.sigma.begin(), pts.sigma.end());
    fit.fit_hi = *std::max_element(pts.sigma.begin(), pts.sigma.end());
    if (!(fit.lambda > 0.0))
        throw std::runtime_error(
            "fit_stretched_exponential: fitted lambda <= 0 (density not decaying)");
    return fit;
}

StretchedExpFit fit_stretched_exponential(const Density& dist, double fit_lo, double fit_hi,
                                          const StretchedExpOptions& options) {
    if (!(fit_lo < fit_hi))
        throw std::invalid_argument("fit_stretched_exponential: empty fit range");
    std::vector<double> sigma, density, weight;
    for (std::size_t i = 0; i < dist.centers.size(); ++i) {
        if (dist.centers[i] < fit_lo || dist.centers[i] > fit_hi) continue;
        sigma.push_back(dist.centers[i]);
        density.push_back(dist.density[i]);
        weight.push_back(static_cast<double>(dist.counts[i]));
    }
    StretchedExpFit fit = fit_stretched_exponential(sigma, density, weight, options);
    fit.fit_lo = fit_lo;
    fit.fit_hi = fit_hi;
    return fit;
}

double tail_slope(const std::vector<double>& x, const std::vector<double>& density, double x_lo,
                  double x_hi, const std::vector<double>& weights, std::size_t min_bins) {
    if (x.size() != density.size() || (!weights.empty() && weights.size() != x.size()))
        throw std::invalid_argument("tail_slope: length mismatch");
    if (!(x_lo < x_hi)) throw std::invalid_argument("tail_slope: empty range");
    std::vector<double> lx, ld, w;
    for (std::size_t i = 0; i < x.size(); ++i) {
        if (x[i] < x_lo || x[i] > x_hi || !(x[i] > 0.0) || !(density[i] > 0.0)) continue;
        lx.push_back(std::log(x[i]));
        ld.push_back(std::log(density[i]));
        w.push_back(weights.empty() ? 1.0 : weights[i]);
    }
    if (lx.size() < min_bins)
        throw std::invalid_argument("tail_slope: fewer than " + std::to_string(min_bins) +
                                    " usable bins in range");
    return weighted_linear_fit(lx, ld, w).slope;
}

double tail_slope(const Density& dist, double x_lo, double x_hi, std::size_t min_bins) {
    std::vector<double> w(dist.counts.size());
    for (std::size_t i = 0; i < w.size(); ++i) w[i] = static_cast<double>(dist.counts[i]);
    return tail_slope(dist.centers, dist.density, x_lo, x_hi, w, min_bins);
}

}  // namespace volmix
