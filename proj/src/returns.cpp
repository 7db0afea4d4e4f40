#include "volmix/returns.hpp"

#include <cmath>
#include <span>
#include <stdexcept>

#include "volmix/stats.hpp"

namespace volmix {

ReturnSeries log_returns(const PriceSeries& prices, std::size_t n, bool cross_session) {
    if (n == 0) throw std::invalid_argument("log_returns: n must be >= 1");
    ReturnSeries out;
    out.n = n;

    auto sessions = prices.sessions();
    if (cross_session && !prices.timestamps.empty())
        sessions = {{std::size_t{0}, prices.size()}};

    std::uint32_t sid = 0;
    for (const auto& [begin, end] : sessions) {
        for (std::size_t k = begin; k + n < end; k += n) {
            const double p0 = prices.prices[k];
            const double p1 = prices.prices[k + n];
            if (!(p0 > 0.0) || !(p1 > 0.0))
                throw std::invalid_argument("log_returns: non-positive price");
            out.values.push_back(std::log(p1 / p0));
            out.timestamps.push_back(prices.timestamps[k + n]);
            out.session_ids.push_back(sid);
        }
        ++sid;
    }
    if (out.values.empty())
        throw std::invalid_argument("log_returns: no session holds n+1 samples");
    return out;
}

VolatilitySeries windowed_volatility(const ReturnSeries& returns, std::size_t window_length) {
    if (window_length < 2)
        throw std::invalid_argument("windowed_volatility: window_length must be >= 2");
    if (returns.n != 1)
        throw std::invalid_argument("windowed_volatility: requires base (n = 1) returns");

    VolatilitySeries out;
    out.window_length = window_length;
    std::size_t i = 0;
    const std::size_t total = returns.size();
    while (i < total) {
        // Advance j to the end of the current session's run.
        std::size_t j = i;
        while (j < total && returns.session_ids[j] == returns.session_ids[i]) ++j;
        for (std::size_t w = i; w + window_length <= j; w += window_length) {
            out.sigmas.push_back(
                sample_stddev(std::span<const double>(returns.values).subspan(w, window_length)));
            out.window_starts.push_back(returns.timestamps[w]);
        }
        i = j;
    }
    return out;
}

std::vector<double> autocorrelation(const std::vector<double>& values, std::size_t max_lag) {
    if (values.size() <= max_lag + 1)
        throw std::invalid_argument("autocorrelation: series shorter than max_lag + 2");
    const double m = mean(values);
    const std::size_t n = values.size();
    double c0 = 0.0;
    for (double v : values) c0 += (v - m) * (v - m);
    if (c0 == 0.0) throw std::invalid_argument("autocorrelation: constant sequence");
    std::vector<double> rho(max_lag + 1);
    rho[0] = 1.0;
    for (std::size_t lag = 1; lag <= max_lag; ++lag) {
        double c = 0.0;
        for (std::size_t t = 0; t + lag < n; ++t) c += (values[t] - m) * (values[t + lag] - m);
        rho[lag] = c / c0;  // biased estimator: same 1/N factor cancels
    }
    return rho;
}

}  // namespace volmix
