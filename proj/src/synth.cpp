#include "volmix/synth.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "volmix/returns.hpp"
#include "volmix/stats.hpp"
#include "volmix/tailfit.hpp"

namespace volmix {

SynthResult generate(const VolatilityModel& model, const SynthSpec& spec) {
    if (spec.total_returns == 0) throw std::invalid_argument("generate: total_returns must be > 0");
    if (spec.window_length < 2) throw std::invalid_argument("generate: window_length must be >= 2");
    if (spec.total_returns % spec.window_length != 0)
        throw std::invalid_argument("generate: total_returns must be a multiple of window_length");
    if (!(spec.initial_price > 0.0))
        throw std::invalid_argument("generate: initial_price must be > 0");
    if (spec.base_interval <= 0) throw std::invalid_argument("generate: base_interval must be > 0");

    const std::size_t epochs = spec.total_returns / spec.window_length;
    std::mt19937_64 rng(spec.seed);
    std::normal_distribution<double> normal(0.0, 1.0);

    SynthResult result;
    result.returns.n = 1;
    result.returns.values.reserve(spec.total_returns);
    result.returns.timestamps.reserve(spec.total_returns);
    result.returns.session_ids.assign(spec.total_returns, 0);
    result.epoch_sigmas.window_length = spec.window_length;
    result.epoch_sigmas.sigmas.reserve(epochs);
    result.epoch_sigmas.window_starts.reserve(epochs);

    for (std::size_t e = 0; e < epochs; ++e) {
        const double sigma = model.sample(rng);
        result.epoch_sigmas.sigmas.push_back(sigma);
        result.epoch_sigmas.window_starts.push_back(
            spec.start_time +
            static_cast<std::int64_t>(e * spec.window_length + 1) * spec.base_interval);
        for (std::size_t k = 0; k < spec.window_length; ++k) {
            result.returns.values.push_back(sigma * normal(rng));
            result.returns.timestamps.push_back(
                spec.start_time +
                static_cast<std::int64_t>(result.returns.values.size()) * spec.base_interval);
        }
    }

    if (spec.emit_prices) {
        result.prices.base_interval = spec.base_interval;
        result.prices.timestamps.resize(spec.total_returns + 1);
        result.prices.prices.resize(spec.total_returns + 1);
        const double log_p0 = std::log(spec.initial_price);
        double cum = 0.0;
        result.prices.timestamps[0] = spec.start_time;
        result.prices.prices[0] = spec.initial_price;
        for (std::size_t i = 0; i < spec.total_returns; ++i) {
            cum += result.returns.values[i];
            const double lp = log_p0 + cum;
            if (std::abs(lp) > 700.0)
                throw std::overflow_error(
                    "generate: cumulative return exceeds double range when exponentiated; "
                    "use a smaller volatility scale or emit_prices = false");
            result.prices.timestamps[i + 1] =
                spec.start_time + static_cast<std::int64_t>(i + 1) * spec.base_interval;
            result.prices.prices[i + 1] = std::exp(lp);
        }
    }
    return result;
}

StylizedFactsReport stylized_facts_report(const PriceSeries& prices, std::size_t max_lag) {
    const ReturnSeries base = log_returns(prices, 1);
    const std::vector<double>& r = base.values;
    if (r.size() < 100000)
        throw std::invalid_argument("stylized_facts_report: need at least 100000 base returns");

    StylizedFactsReport report;
    report.sample_size = r.size();
    report.mean = mean(r);
    report.stddev = sample_stddev(r);
    report.skewness = sample_skewness(r);

    {
        double m2 = 0.0, m4 = 0.0;
        for (double v : r) {
            const double d = v - report.mean;
            m2 += d * d;
            m4 += d * d * d * d;
        }
        const double n = static_cast<double>(r.size());
        m2 /= n;
        m4 /= n;
        report.excess_kurtosis = m4 / (m2 * m2) - 3.0;
    }

    std::vector<double> abs_r(r.size());
    for (std::size_t i = 0; i < r.size(); ++i) abs_r[i] = std::abs(r[i]);

    const auto rho = autocorrelation(r, max_lag);
    const auto rho_abs = autocorrelation(abs_r, max_lag);
    report.return_acf.assign(rho.begin() + 1, rho.end());
    report.abs_return_acf.assign(rho_abs.begin() + 1, rho_abs.end());
    for (double v : report.return_acf)
        report.max_abs_return_acf = std::max(report.max_abs_return_acf, std::abs(v));
    report.abs_acf_lag1 = report.abs_return_acf.front();

    // Tail of |r|: Clauset fit on the nonzero magnitudes, plus the log-log
    // density slope over the upper tail when enough bins carry mass.
    std::vector<double> positive;
    positive.reserve(abs_r.size());
    for (double v : abs_r)
        if (v > 0.0) positive.push_back(v);
    const PowerLawFit tail = fit_power_law(positive);
    report.tail_alpha = tail.alpha;
    report.tail_x_min = tail.x_min;
    report.tail_size = tail.tail_size;

    std::vector<double> sorted = positive;
    std::sort(sorted.begin(), sorted.end());
    const double q95 = quantile_sorted(sorted, 0.95);
    const double q9999 = quantile_sorted(sorted, 0.9999);
    try {
        const Density dens = empirical_density(abs_r, {});
        report.density_tail_slope = tail_slope(dens, q95, q9999);
    } catch (const std::invalid_argument&) {
        // Thin-tailed series may not populate enough bins up there; the
        // slope is meaningless in that case.
        report.density_tail_slope = std::numeric_limits<double>::quiet_NaN();
    }

    const std::vector<std::size_t> scales = {5, 15, 30, 60};
    std::vector<std::vector<double>> rescaled;
    rescaled.reserve(scales.size());
    for (std::size_t n : scales)
        rescaled.push_back(rescale_returns(log_returns(prices, n).values, n));
    report.collapse = collapse_metric(rescaled, scales);
    return report;
}

}  // namespace volmix
