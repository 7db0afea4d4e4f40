#include "volmix/ingest.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <numeric>
#include <sstream>
#include <stdexcept>

namespace volmix {

std::vector<std::pair<std::size_t, std::size_t>> PriceSeries::sessions() const {
    std::vector<std::pair<std::size_t, std::size_t>> out;
    if (size() == 0) return out;
    std::size_t begin = 0;
    for (std::size_t b : session_breaks) {
        out.emplace_back(begin, b);
        begin = b;
    }
    out.emplace_back(begin, size());
    return out;
}

void PriceSeries::validate() const {
    if (timestamps.size() != prices.size())
        throw std::invalid_argument("PriceSeries: timestamp/price length mismatch");
    if (base_interval <= 0) throw std::invalid_argument("PriceSeries: base_interval must be > 0");
    for (std::size_t i = 0; i < prices.size(); ++i) {
        if (!(prices[i] > 0.0)) throw std::invalid_argument("PriceSeries: non-positive price");
        if (i > 0 && timestamps[i] <= timestamps[i - 1])
            throw std::invalid_argument("PriceSeries: timestamps not strictly increasing");
    }
    std::size_t prev = 0;
    for (std::size_t b : session_breaks) {
        if (b == 0 || b >= size() || b <= prev)
            throw std::invalid_argument("PriceSeries: session break out of order");
        if (timestamps[b] - timestamps[b - 1] <= base_interval)
            throw std::invalid_argument("PriceSeries: session break without a timestamp gap");
        prev = b;
    }
}

namespace {

// Days since 1970-01-01 for a proleptic Gregorian civil date.
std::int64_t days_from_civil(int y, int m, int d) {
    y -= m <= 2;
    const std::int64_t era = (y >= 0 ? y : y - 399) / 400;
    const unsigned yoe = static_cast<unsigned>(y - era * 400);
    const unsigned doy = (153u * static_cast<unsigned>(m + (m > 2 ? -3 : 9)) + 2u) / 5u +
                         static_cast<unsigned>(d) - 1u;
    const unsigned doe = yoe * 365u + yoe / 4u - yoe / 100u + doy;
    return era * 146097 + static_cast<std::int64_t>(doe) - 719468;
}

void civil_from_days(std::int64_t z, int& y, unsigned& m, unsigned& d) {
    z += 719468;
    const std::int64_t era = (z >= 0 ? z : z - 146096) / 146097;
    const unsigned doe = static_cast<unsigned>(z - era * 146097);
    const unsigned yoe = (doe - doe / 1460 + doe / 36524 - doe / 146096) / 365;
    const std::int64_t yy = static_cast<std::int64_t>(yoe) + era * 400;
    const unsigned doy = doe - (365 * yoe + yoe / 4 - yoe / 100);
    const unsigned mp = (5 * doy + 2) / 153;
    d = doy - (153 * mp + 2) / 5 + 1;
    m = mp + (mp < 10 ? 3 : static_cast<unsigned>(-9));
    y = static_cast<int>(yy + (m <= 2));
}

bool parse_int(std::string_view s, int& out) {
    auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
    return ec == std::errc{} && p == s.data() + s.size();
}

}  // namespace

std::int64_t parse_timestamp(const std::string& text) {
    std::string s = text;
    // Trim surrounding whitespace.
    const auto first = s.find_first_not_of(" \t\r");
    const auto last = s.find_last_not_of(" \t\r");
    if (first == std::string::npos) throw std::invalid_argument("empty timestamp");
    s = s.substr(first, last - first + 1);

    // ISO-8601: YYYY-MM-DD[ T]HH:MM[:SS][Z]
    if (s.size() >= 10 && s[4] == '-' && s[7] == '-') {
        int y, mo, d, h = 0, mi = 0, sec = 0;
        if (!parse_int(std::string_view(s).substr(0, 4), y) ||
            !parse_int(std::string_view(s).substr(5, 2), mo) ||
            !parse_int(std::string_view(s).substr(8, 2), d))
            throw std::invalid_argument("bad timestamp: " + text);
        if (s.size() > 10) {
            if ((s[10] != ' ' && s[10] != 'T') || s.size() < 16 || s[13] != ':')
                throw std::invalid_argument("bad timestamp: " + text);
            if (!parse_int(std::string_view(s).substr(11, 2), h) ||
                !parse_int(std::string_view(s).substr(14, 2), mi))
                throw std::invalid_argument("bad timestamp: " + text);
            if (s.size() >= 19 && s[16] == ':') {
                if (!parse_int(std::string_view(s).substr(17, 2), sec))
                    throw std::invalid_argument("bad timestamp: " + text);
            }
            // A trailing 'Z' is accepted (all timestamps are treated as UTC).
        }
        if (mo < 1 || mo > 12 || d < 1 || d > 31 || h > 23 || mi > 59 || sec > 60)
            throw std::invalid_argument("bad timestamp: " + text);
        return days_from_civil(y, mo, d) * 86400 + h * 3600 + mi * 60 + sec;
    }

    // Plain integer epoch seconds.
    std::int64_t v = 0;
    auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc{} || p != s.data() + s.size())
        throw std::invalid_argument("bad timestamp: " + text);
    return v;
}

std::string format_timestamp(std::int64_t epoch_seconds) {
    std::int64_t days = epoch_seconds / 86400;
    std::int64_t rem = epoch_seconds % 86400;
    if (rem < 0) {
        rem += 86400;
        --days;
    }
    int y;
    unsigned mo, d;
    civil_from_days(days, y, mo, d);
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%04d-%02u-%02uT%02lld:%02lld:%02lldZ", y, mo, d,
                  static_cast<long long>(rem / 3600), static_cast<long long>((rem % 3600) / 60),
                  static_cast<long long>(rem % 60));
    return buf;
}

namespace {

std::vector<std::string> split_line(const std::string& line, char delim) {
    std::vector<std::string> out;
    std::string cur;
    for (char c : line) {
        if (c == delim) {
            out.push_back(cur);
            cur.clear();
        } else if (c != '\r') {
            cur += c;
        }
    }
    out.push_back(cur);
    return out;
}

bool parse_price(const std::string& cell, double& out) {
    const char* b = cell.data();
    const char* e = b + cell.size();
    while (b < e && std::isspace(static_cast<unsigned char>(*b))) ++b;
    while (e > b && std::isspace(static_cast<unsigned char>(e[-1]))) --e;
    if (b == e) return false;
    auto [p, ec] = std::from_chars(b, e, out);
    if (ec != std::errc{} || p != e) return false;
    return std::isfinite(out);
}

}  // namespace

LoadResult load_prices(const std::filesystem::path& path, const CsvFormat& format,
                       std::int64_t base_interval_seconds) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open " + path.string());
    if (base_interval_seconds <= 0) throw std::invalid_argument("base interval must be > 0");

    std::string line;
    if (!std::getline(in, line)) throw std::runtime_error("empty file: " + path.string());
    const auto header = split_line(line, format.delimiter);
    std::size_t t_col = header.size(), p_col = header.size();
    for (std::size_t i = 0; i < header.size(); ++i) {
        if (header[i] == format.timestamp_column) t_col = i;
        if (header[i] == format.price_column) p_col = i;
    }
    if (t_col == header.size())
        throw std::runtime_error("missing timestamp column '" + format.timestamp_column + "' in " +
                                 path.string());
    if (p_col == header.size())
        throw std::runtime_error("missing price column '" + format.price_column + "' in " +
                                 path.string());

    LoadResult result;
    auto& stats = result.stats;
    std::vector<std::pair<std::int64_t, double>> rows;
    std::size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty() || line == "\r") continue;
        ++stats.rows_total;
        const auto cells = split_line(line, format.delimiter);
        if (cells.size() <= std::max(t_col, p_col)) {
            ++stats.rows_dropped;
            continue;
        }
        std::int64_t ts;
        try {
            ts = parse_timestamp(cells[t_col]);
        } catch (const std::invalid_argument&) {
            throw std::runtime_error(path.string() + ":" + std::to_string(line_no) +
                                     ": unparseable timestamp '" + cells[t_col] + "'");
        }
        double price;
        if (!parse_price(cells[p_col], price) || price <= 0.0) {
            ++stats.rows_dropped;  // missing, unparseable, or non-positive price
            continue;
        }
        rows.emplace_back(ts, price);
    }
    if (rows.empty()) throw std::runtime_error("no valid rows in " + path.string());

    if (!std::is_sorted(rows.begin(), rows.end(),
                        [](const auto& a, const auto& b) { return a.first < b.first; })) {
        if (format.strict)
            throw std::runtime_error("timestamps not sorted in " + path.string() +
                                     " (strict mode)");
        std::stable_sort(rows.begin(), rows.end(),
                         [](const auto& a, const auto& b) { return a.first < b.first; });
    }

    auto& series = result.series;
    series.base_interval = base_interval_seconds;
    series.timestamps.reserve(rows.size());
    series.prices.reserve(rows.size());
    for (const auto& [ts, price] : rows) {
        if (!series.timestamps.empty() && series.timestamps.back() == ts) {
            // Duplicate timestamp: vendor correction, last record wins.
            series.prices.back() = price;
            ++stats.duplicates_removed;
            continue;
        }
        if (!series.timestamps.empty() && ts - series.timestamps.back() > base_interval_seconds)
            series.session_breaks.push_back(series.timestamps.size());
        series.timestamps.push_back(ts);
        series.prices.push_back(price);
    }
    stats.session_count = series.session_breaks.size() + 1;
    series.validate();
    return result;
}

PriceSeries resample(const PriceSeries& series, std::size_t n) {
    if (n == 0) throw std::invalid_argument("resample: n must be >= 1");
    if (n == 1) return series;
    PriceSeries out;
    out.base_interval = series.base_interval * static_cast<std::int64_t>(n);
    for (const auto& [begin, end] : series.sessions()) {
        const std::size_t before = out.size();
        // Last price of each complete n-bucket; the bucket counter restarts
        // at every session boundary and partial trailing buckets are
        // dropped.
        for (std::size_t k = begin + n - 1; k < end; k += n) {
            out.timestamps.push_back(series.timestamps[k]);
            out.prices.push_back(series.prices[k]);
        }
        if (before > 0 && out.size() > before) out.session_breaks.push_back(before);
    }
    return out;
}

void write_prices_csv(const std::filesystem::path& path, const PriceSeries& series) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write " + path.string());
    out << "timestamp,close\n";
    char buf[40];
    for (std::size_t i = 0; i < series.size(); ++i) {
        std::snprintf(buf, sizeof(buf), "%.17g", series.prices[i]);
        out << series.timestamps[i] << ',' << buf << '\n';
    }
    if (!out) throw std::runtime_error("write failed: " + path.string());
}

std::vector<double> read_numeric_column(const std::filesystem::path& path,
                                        const std::string& column, char delimiter) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open " + path.string());
    std::string line;
    if (!std::getline(in, line)) throw std::runtime_error("empty file: " + path.string());
    const auto header = split_line(line, delimiter);
    std::size_t col = header.size();
    if (column.empty()) {
        col = 0;
        // Headerless single-column files: first line may already be data.
        double v;
        if (header.size() == 1 && parse_price(header[0], v)) {
            std::vector<double> out{v};
            while (std::getline(in, line)) {
                if (line.empty()) continue;
                if (!parse_price(line, v))
                    throw std::runtime_error("bad numeric row in " + path.string());
                out.push_back(v);
            }
            return out;
        }
    } else {
        for (std::size_t i = 0; i < header.size(); ++i)
            if (header[i] == column) col = i;
        if (col == header.size())
            throw std::runtime_error("missing column '" + column + "' in " + path.string());
    }
    std::vector<double> out;
    while (std::getline(in, line)) {
        if (line.empty() || line == "\r") continue;
        const auto cells = split_line(line, delimiter);
        if (cells.size() <= col) throw std::runtime_error("short row in " + path.string());
        double v;
        if (!parse_price(cells[col], v))
            throw std::runtime_error("bad numeric cell '" + cells[col] + "' in " + path.string());
        out.push_back(v);
    }
    return out;
}

}  // namespace volmix
