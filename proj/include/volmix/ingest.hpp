#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "volmix/series.hpp"

namespace volmix {

/// Column mapping and parse options for delimited price files.
struct CsvFormat {
    std::string timestamp_column = "timestamp";
    std::string price_column = "close";
    char delimiter = ',';
    // strict: reject non-monotone timestamps instead of sorting.
    bool strict = false;
};

struct LoadStats {
    std::size_t rows_total = 0;
    std::size_t rows_dropped = 0;       // missing / non-positive / unparseable price
    std::size_t duplicates_removed = 0; // same timestamp, last record kept
    std::size_t session_count = 1;
};

struct LoadResult {
    PriceSeries series;
    LoadStats stats;
};

/// Parse "YYYY-MM-DD HH:MM[:SS]" / "YYYY-MM-DDTHH:MM[:SS][Z]" (UTC) or plain
/// epoch seconds. Throws std::invalid_argument on anything else.
std::int64_t parse_timestamp(const std::string& text);
std::string format_timestamp(std::int64_t epoch_seconds);

/// Load a delimited file into a canonical PriceSeries at the given base
/// interval. Rows with missing or non-positive prices are dropped and
/// counted; timestamp gaps larger than the base interval become session
/// breaks. Throws on unreadable files, missing columns, zero valid rows, or
/// (in strict mode) unsorted timestamps.
LoadResult load_prices(const std::filesystem::path& path, const CsvFormat& format = {},
                       std::int64_t base_interval_seconds = 60);

/// Keep the last price of every complete n-bucket within each session;
/// partial trailing buckets are dropped and buckets never span a session
/// break. n = 1 is the identity.
PriceSeries resample(const PriceSeries& series, std::size_t n);

void write_prices_csv(const std::filesystem::path& path, const PriceSeries& series);

/// Generic numeric-table reader used by fit-tail and by artifact round-trip
/// checks: returns the named column (or the single column when name empty).
std::vector<double> read_numeric_column(const std::filesystem::path& path,
                                        const std::string& column = "",
                                        char delimiter = ',');

}  // namespace volmix
