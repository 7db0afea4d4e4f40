#pragma once

#include <cstddef>
#include <vector>

#include "volmix/series.hpp"

namespace volmix {

/// Non-overlapping log returns at stride n: log p[k+n] - log p[k] with
/// k = 0, n, 2n, ... within each session. Pairs that would straddle a session
/// break are skipped unless cross_session is set (then breaks are ignored and
/// the series is treated as one session). Throws on n == 0 or non-positive
/// prices.
ReturnSeries log_returns(const PriceSeries& prices, std::size_t n = 1,
                         bool cross_session = false);

/// Sample standard deviation (divisor count-1) of consecutive disjoint
/// windows of exactly window_length returns. Windows never straddle session
/// boundaries; trailing partial windows are dropped. Throws on
/// window_length < 2.
VolatilitySeries windowed_volatility(const ReturnSeries& returns, std::size_t window_length);

/// Biased sample autocorrelation at lags 0..max_lag: c(k)/c(0) with
/// c(k) = (1/N) * sum (x_t - xbar)(x_{t+k} - xbar). rho[0] == 1. Throws if
/// the series is shorter than max_lag + 1 or has zero variance.
std::vector<double> autocorrelation(const std::vector<double>& values, std::size_t max_lag);

}  // namespace volmix
