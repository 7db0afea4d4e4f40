#pragma once

#include <cstdint>
#include <cstddef>
#include <vector>

namespace volmix {

/// Timestamped price path at a fixed sampling interval. Sessions are
/// contiguous runs of samples; session_breaks[k] is the index of the first
/// sample of session k+1 (0 < index < size). Immutable by convention once
/// built.
struct PriceSeries {
    std::vector<std::int64_t> timestamps;  // epoch seconds, strictly increasing
    std::vector<double> prices;            // > 0
    std::vector<std::size_t> session_breaks;
    std::int64_t base_interval = 60;       // sample spacing in seconds

    std::size_t size() const { return prices.size(); }

    // Session boundaries as half-open [begin, end) index ranges.
    std::vector<std::pair<std::size_t, std::size_t>> sessions() const;

    // Throws std::invalid_argument on any broken invariant: non-monotone
    // timestamps, non-positive prices, size mismatch, bad break indices.
    void validate() const;
};

/// Log returns at aggregation level n (in units of the source series'
/// base interval), non-overlapping stride, never spanning a session break.
struct ReturnSeries {
    std::vector<double> values;
    std::vector<std::int64_t> timestamps;  // right endpoint of each return
    std::vector<std::uint32_t> session_ids;
    std::size_t n = 1;

    std::size_t size() const { return values.size(); }
};

/// Standard deviations of base-resolution returns over non-overlapping
/// windows, each window inside a single session.
struct VolatilitySeries {
    std::vector<double> sigmas;
    std::vector<std::int64_t> window_starts;
    std::size_t window_length = 0;  // returns per window

    std::size_t size() const { return sigmas.size(); }
};

}  // namespace volmix
