#pragma once

#include <cstdint>
#include <vector>

#include "volmix/distribution.hpp"
#include "volmix/mixture.hpp"
#include "volmix/series.hpp"

namespace volmix {

/// Synthetic return generator: volatility is redrawn from the model once per
/// epoch of window_length steps and returns within the epoch are i.i.d.
/// N(0, sigma^2). total_returns must be a whole number of epochs.
struct SynthSpec {
    std::size_t total_returns = 0;  // multiple of window_length, > 0
    std::size_t window_length = 390;
    std::uint64_t seed = 1;
    std::int64_t base_interval = 60;      // seconds between samples
    std::int64_t start_time = 946684800;  // 2000-01-01T00:00:00Z
    double initial_price = 100.0;
    // Materializing the price path exponentiates the cumulative return; for
    // volatility scales far above real minute-return magnitudes the cumsum
    // can exceed double range, so callers that only need returns can skip it.
    bool emit_prices = true;
};

struct SynthResult {
    ReturnSeries returns;
    VolatilitySeries epoch_sigmas;  // the sigma drawn for each epoch
    PriceSeries prices;             // exp-cumulated path starting at initial_price
};

/// Deterministic given (model, spec.seed). Throws on invalid spec
/// (total_returns == 0 or not a multiple of window_length, window_length < 2,
/// initial_price <= 0).
SynthResult generate(const VolatilityModel& model, const SynthSpec& spec);

/// Headline diagnostics of a price series: heavy tails, no linear memory,
/// persistent volatility, and the multi-scale distribution collapse.
struct StylizedFactsReport {
    std::size_t sample_size = 0;  // base (n = 1) returns
    double mean = 0.0;
    double stddev = 0.0;
    double skewness = 0.0;
    double excess_kurtosis = 0.0;
    double tail_alpha = 0.0;  // power-law exponent fitted to the |r| tail
    double tail_x_min = 0.0;
    std::size_t tail_size = 0;
    double density_tail_slope = 0.0;     // log-log slope of the |r| density tail
    std::vector<double> return_acf;      // lags 1..max_lag
    std::vector<double> abs_return_acf;  // lags 1..max_lag
    double max_abs_return_acf = 0.0;     // max |rho_ret(l)|, l >= 1
    double abs_acf_lag1 = 0.0;           // rho_|ret|(1)
    CollapseReport collapse;             // over scales {5, 15, 30, 60}
};

/// Requires at least 10^5 base returns (throws otherwise): the tail fit and
/// the collapse metric are meaningless below that.
StylizedFactsReport stylized_facts_report(const PriceSeries& prices, std::size_t max_lag = 20);

}  // namespace volmix
