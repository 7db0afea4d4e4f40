#include "volmix/cli.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <tuple>

#include "json.hpp"

#include "volmix/distribution.hpp"
#include "volmix/ingest.hpp"
#include "volmix/mixture.hpp"
#include "volmix/returns.hpp"
#include "volmix/stats.hpp"
#include "volmix/synth.hpp"
#include "volmix/tailfit.hpp"

namespace volmix::cli {

using nlohmann::json;
namespace fs = std::filesystem;

std::string json_number_string(double x) { return json(x).dump(); }

// ---------------------------------------------------------------------------
// config

void RunConfig::validate() const {
    if (delimiter.size() != 1)
        throw std::invalid_argument("config: delimiter must be a single character");
    if (base_interval <= 0) throw std::invalid_argument("config: base-interval must be > 0");
    if (window_length < 2) throw std::invalid_argument("config: window-length must be >= 2");
    if (bins < 2) throw std::invalid_argument("config: bins must be >= 2");
    if (scales.empty()) throw std::invalid_argument("config: scales must not be empty");
    for (std::size_t i = 0; i < scales.size(); ++i) {
        if (scales[i] == 0) throw std::invalid_argument("config: scales must be positive");
        if (i > 0 && scales[i] <= scales[i - 1])
            throw std::invalid_argument("config: scales must be strictly increasing");
    }
    if (tail_model != "power_law" && tail_model != "stretched_exp" && tail_model != "auto")
        throw std::invalid_argument(
            "config: tail-model must be one of power_law, stretched_exp, auto");
    if (!std::isnan(fit_lo) && !std::isnan(fit_hi) && !(fit_lo < fit_hi))
        throw std::invalid_argument("config: fit-lo must be below fit-hi");
    if (model != "point_mass" && model != "pareto_tail" && model != "stretched_exp" &&
        model != "lognormal" && model != "empirical")
        throw std::invalid_argument("config: unknown model '" + model + "'");
}

namespace {

bool parse_bool(const std::string& v) {
    if (v == "true" || v == "1" || v == "yes" || v == "on") return true;
    if (v == "false" || v == "0" || v == "no" || v == "off") return false;
    throw std::invalid_argument("config: bad boolean '" + v + "'");
}

template <class T, class Parse>
std::vector<T> parse_list(const std::string& v, Parse&& parse) {
    std::vector<T> out;
    std::stringstream ss(v);
    std::string item;
    while (std::getline(ss, item, ','))
        if (!item.empty()) out.push_back(parse(item));
    return out;
}

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return "";
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

}  // namespace

void apply_config_entry(RunConfig& config, const std::string& key, const std::string& value) {
    if (key == "input") {
        config.inputs.push_back(value);
    } else if (key == "timestamp-column") {
        config.timestamp_column = value;
    } else if (key == "price-column") {
        config.price_column = value;
    } else if (key == "delimiter") {
        config.delimiter = value;
    } else if (key == "base-interval") {
        config.base_interval = std::stoll(value);
    } else if (key == "strict-timestamps") {
        config.strict_timestamps = parse_bool(value);
    } else if (key == "include-cross-session") {
        config.include_cross_session = parse_bool(value);
    } else if (key == "window-length") {
        config.window_length = static_cast<std::size_t>(std::stoull(value));
    } else if (key == "scales") {
        config.scales = parse_list<std::size_t>(
            value, [](const std::string& s) { return static_cast<std::size_t>(std::stoull(s)); });
    } else if (key == "tail-model") {
        config.tail_model = value;
    } else if (key == "fit-lo") {
        config.fit_lo = std::stod(value);
    } else if (key == "fit-hi") {
        config.fit_hi = std::stod(value);
    } else if (key == "bins") {
        config.bins = static_cast<std::size_t>(std::stoull(value));
    } else if (key == "model") {
        config.model = value;
    } else if (key == "model-params") {
        config.model_params =
            parse_list<double>(value, [](const std::string& s) { return std::stod(s); });
    } else if (key == "total-returns") {
        config.total_returns = static_cast<std::size_t>(std::stoull(value));
    } else if (key == "seed") {
        config.seed = std::stoull(value);
    } else if (key == "out") {
        config.out_dir = value;
    } else {
        throw std::invalid_argument("config: unknown key '" + key + "'");
    }
}

RunConfig load_config_file(const fs::path& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open config file " + path.string());
    RunConfig config;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        const std::string stripped = trim(line);
        if (stripped.empty()) continue;
        const auto eq = stripped.find('=');
        if (eq == std::string::npos)
            throw std::runtime_error(path.string() + ":" + std::to_string(line_no) +
                                     ": expected key = value");
        const std::string key = trim(stripped.substr(0, eq));
        const std::string value = trim(stripped.substr(eq + 1));
        try {
            apply_config_entry(config, key, value);
        } catch (const std::exception& e) {
            throw std::runtime_error(path.string() + ":" + std::to_string(line_no) + ": " +
                                     e.what());
        }
    }
    return config;
}

// ---------------------------------------------------------------------------
// manifest

void Manifest::add(const std::string& relative_path, const std::string& stage) {
    entries.push_back({relative_path, stage});
}

void Manifest::write(const fs::path& out_dir) const {
    json doc;
    doc["complete"] = complete;
    if (!complete) {
        doc["failed_stage"] = failed_stage;
        doc["error"] = error;
    }
    doc["artifacts"] = json::array();
    for (const auto& e : entries) doc["artifacts"].push_back({{"path", e.path}, {"stage", e.stage}});
    std::ofstream out(out_dir / "manifest.json");
    if (!out) throw std::runtime_error("cannot write manifest.json under " + out_dir.string());
    out << doc.dump(2) << "\n";
}

// ---------------------------------------------------------------------------
// shared helpers

namespace {

std::string fmt17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

void write_text(const fs::path& path, const std::string& text) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write " + path.string());
    out << text;
    if (!out) throw std::runtime_error("write failed: " + path.string());
}

void write_json(const fs::path& path, const json& doc) { write_text(path, doc.dump(2) + "\n"); }

void write_density_csv(const fs::path& path, const Density& d) {
    std::ostringstream out;
    out << "bin_center,density,count\n";
    for (std::size_t i = 0; i < d.centers.size(); ++i)
        out << fmt17(d.centers[i]) << ',' << fmt17(d.density[i]) << ',' << d.counts[i] << '\n';
    write_text(path, out.str());
}

fs::path prepare_out_dir(const RunConfig& config) {
    if (config.out_dir.empty()) throw std::invalid_argument("config: --out directory is required");
    fs::path out(config.out_dir);
    fs::create_directories(out);
    return out;
}

CsvFormat csv_format(const RunConfig& config) {
    CsvFormat f;
    f.timestamp_column = config.timestamp_column;
    f.price_column = config.price_column;
    f.delimiter = config.delimiter[0];
    f.strict = config.strict_timestamps;
    return f;
}

// Load every input file and concatenate them in order, with a forced session
// break at each file boundary.
PriceSeries load_all(const RunConfig& config, json* stats_out) {
    if (config.inputs.empty()) throw std::invalid_argument("config: at least one input required");
    PriceSeries merged;
    json per_file = json::array();
    std::size_t rows_total = 0, rows_dropped = 0, duplicates = 0;
    for (const auto& input : config.inputs) {
        LoadResult r = load_prices(input, csv_format(config), config.base_interval);
        per_file.push_back({{"path", input},
                            {"rows_total", r.stats.rows_total},
                            {"rows_dropped", r.stats.rows_dropped},
                            {"duplicates_removed", r.stats.duplicates_removed},
                            {"sessions", r.stats.session_count},
                            {"samples", r.series.size()}});
        rows_total += r.stats.rows_total;
        rows_dropped += r.stats.rows_dropped;
        duplicates += r.stats.duplicates_removed;
        if (merged.size() == 0) {
            merged = std::move(r.series);
            continue;
        }
        if (r.series.timestamps.front() <= merged.timestamps.back())
            throw std::runtime_error("input files overlap in time: " + input);
        const std::size_t offset = merged.size();
        // File boundaries follow the same session rule as in-file gaps, so
        // the merged series round-trips through its own CSV form.
        if (r.series.timestamps.front() - merged.timestamps.back() > config.base_interval)
            merged.session_breaks.push_back(offset);
        for (std::size_t b : r.series.session_breaks) merged.session_breaks.push_back(offset + b);
        merged.timestamps.insert(merged.timestamps.end(), r.series.timestamps.begin(),
                                 r.series.timestamps.end());
        merged.prices.insert(merged.prices.end(), r.series.prices.begin(), r.series.prices.end());
    }
    merged.validate();
    if (stats_out) {
        (*stats_out)["files"] = per_file;
        (*stats_out)["rows_total"] = rows_total;
        (*stats_out)["rows_dropped"] = rows_dropped;
        (*stats_out)["duplicates_removed"] = duplicates;
        (*stats_out)["samples"] = merged.size();
        (*stats_out)["sessions"] = merged.session_breaks.size() + 1;
    }
    return merged;
}

VolatilityModel model_from_config(const RunConfig& config) {
    const auto& p = config.model_params;
    const auto need = [&](std::size_t n, const char* signature) {
        if (p.size() != n)
            throw std::invalid_argument("model '" + config.model + "' expects parameters " +
                                        signature);
    };
    if (config.model == "point_mass") {
        need(1, "sigma0");
        return VolatilityModel::point_mass(p[0]);
    }
    if (config.model == "pareto_tail") {
        need(2, "alpha,sigma_min");
        return VolatilityModel::pareto_tail(p[0], p[1]);
    }
    if (config.model == "stretched_exp") {
        need(3, "lambda,beta,sigma_lo");
        return VolatilityModel::stretched_exp(p[0], p[1], p[2]);
    }
    if (config.model == "lognormal") {
        need(2, "mu,s");
        return VolatilityModel::lognormal(p[0], p[1]);
    }
    throw std::invalid_argument("model 'empirical' cannot be built from flags; it is estimated "
                                "from data by the analyze pipeline");
}

json fit_to_json(const PowerLawFit& fit) {
    return {{"alpha", fit.alpha},
            {"x_min", fit.x_min},
            {"ks_distance", fit.ks_distance},
            {"tail_size", fit.tail_size}};
}

json fit_to_json(const StretchedExpFit& fit) {
    return {{"c", fit.c},        {"lambda", fit.lambda},     {"beta", fit.beta},
            {"log_c", fit.log_c}, {"fit_lo", fit.fit_lo},    {"fit_hi", fit.fit_hi},
            {"residual", fit.residual}, {"bins_used", fit.bins_used}};
}

struct TailFitOutcome {
    std::string selected;
    std::optional<PowerLawFit> power_law;
    std::optional<StretchedExpFit> stretched;
    json diagnostics;  // auto-selection details, when applicable
};

// Fit the configured tail model(s) to positive samples. For "auto", both
// families are fitted and compared by count-weighted RMS log-density
// residual over the shared upper range; the rule and both residuals are
// recorded in the diagnostics.
TailFitOutcome fit_tail_samples(const std::vector<double>& samples, const RunConfig& config) {
    TailFitOutcome outcome;

    std::vector<double> sorted = samples;
    std::sort(sorted.begin(), sorted.end());
    const double default_lo = quantile_sorted(sorted, 0.5);
    const double default_hi = quantile_sorted(sorted, 0.999);
    const double fit_lo = std::isnan(config.fit_lo) ? default_lo : config.fit_lo;
    const double fit_hi = std::isnan(config.fit_hi) ? default_hi : config.fit_hi;

    DensityOptions opts;
    opts.scale = BinScale::logarithmic;
    opts.bin_count = config.bins;
    const Density density = empirical_density(samples, opts);

    std::optional<std::string> power_law_error, stretched_error;
    if (config.tail_model == "power_law" || config.tail_model == "auto") {
        try {
            PowerLawOptions plo;
            if (!std::isnan(config.fit_lo)) plo.forced_x_min = config.fit_lo;
            outcome.power_law = fit_power_law(samples, plo);
        } catch (const std::exception& e) {
            if (config.tail_model == "power_law") throw;
            power_law_error = e.what();
        }
    }
    if (config.tail_model == "stretched_exp" || config.tail_model == "auto") {
        try {
            outcome.stretched = fit_stretched_exponential(density, fit_lo, fit_hi);
        } catch (const std::exception& e) {
            if (config.tail_model == "stretched_exp") throw;
            stretched_error = e.what();
        }
    }

    if (config.tail_model != "auto") {
        outcome.selected = config.tail_model;
        return outcome;
    }
    if (!outcome.power_law && !outcome.stretched) {
        throw std::runtime_error("auto tail fit: both families failed (power_law: " +
                                 power_law_error.value_or("-") + "; stretched_exp: " +
                                 stretched_error.value_or("-") + ")");
    }

    // Both families are scored on the same stretch of upper tail, each by its
    // native goodness measure: the power law by the KS distance of its fitted
    // CDF (conditioned on the shared range), the stretched exponential by its
    // count-weighted RMS log-density residual.  Raw KS and RMS live on
    // different scales, so each is divided by the value it would take were
    // its own family the truth -- sqrt(m)*KS averages ~0.87 under a correct
    // model, and the weighted RMS floats at the Poisson noise floor
    // sqrt(bins/count).  The smaller normalized score wins.
    double shared_lo = 0.0;
    double shared_hi = sorted.back();
    if (outcome.power_law) shared_lo = std::max(shared_lo, outcome.power_law->x_min);
    if (outcome.stretched) {
        shared_lo = std::max(shared_lo, outcome.stretched->fit_lo);
        shared_hi = std::min(shared_hi, outcome.stretched->fit_hi);
    }

    const double nan = std::numeric_limits<double>::quiet_NaN();
    double ks_pl = nan, score_pl = nan;
    std::size_t m_pl = 0;
    if (outcome.power_law) {
        const double alpha = outcome.power_law->alpha;
        const auto first = std::lower_bound(sorted.begin(), sorted.end(), shared_lo);
        const auto last = std::upper_bound(first, sorted.end(), shared_hi);
        m_pl = static_cast<std::size_t>(last - first);
        if (m_pl >= 10) {
            const double m = static_cast<double>(m_pl);
            const double denom = 1.0 - std::pow(shared_hi / shared_lo, 1.0 - alpha);
            double d = 0.0;
            for (std::size_t j = 0; j < m_pl; ++j) {
                const double f =
                    (1.0 - std::pow(first[static_cast<std::ptrdiff_t>(j)] / shared_lo,
                                    1.0 - alpha)) /
                    denom;
                d = std::max({d, f - static_cast<double>(j) / m,
                              static_cast<double>(j + 1) / m - f});
            }
            ks_pl = d;
            score_pl = ks_pl * std::sqrt(m) / 0.87;
        }
    }

    double rms_se = nan, score_se = nan;
    std::size_t bins_se = 0;
    if (outcome.stretched) {
        const auto& f = *outcome.stretched;
        double sw = 0.0, sse = 0.0;
        for (std::size_t i = 0; i < density.centers.size(); ++i) {
            const double x = density.centers[i];
            if (x < shared_lo || x > shared_hi || density.counts[i] == 0) continue;
            const double w = static_cast<double>(density.counts[i]);
            const double resid =
                std::log(density.density[i]) - (f.log_c - f.lambda * std::pow(x, f.beta));
            sw += w;
            sse += w * resid * resid;
            ++bins_se;
        }
        if (bins_se >= 3) {
            rms_se = std::sqrt(sse / sw);
            score_se = rms_se / std::sqrt(static_cast<double>(bins_se) / sw);
        }
    }

    // A stretched fit whose beta sits on the search floor has collapsed into
    // a pure power law (exp(-lambda*x^beta) ~ x^(-lambda*beta) as beta -> 0),
    // so the genuinely power-law family describes such data.
    const bool beta_pinned =
        outcome.stretched && outcome.stretched->beta <= StretchedExpOptions{}.beta_lo + 1e-3;

    if (!outcome.power_law)
        outcome.selected = "stretched_exp";
    else if (!outcome.stretched || beta_pinned || std::isnan(score_se))
        outcome.selected = "power_law";
    else if (std::isnan(score_pl))
        outcome.selected = "stretched_exp";
    else
        outcome.selected = score_pl <= score_se ? "power_law" : "stretched_exp";

    outcome.diagnostics = {
        {"rule",
         "power-law KS distance vs stretched-exponential log-density residual on the shared "
         "tail range, each divided by its own-family noise floor (0.87/sqrt(m) for KS, "
         "sqrt(bins/count) for the residual); smaller normalized score wins; a stretched fit "
         "with beta pinned at the search floor is treated as a degenerate power law"},
        {"shared_range_lo", shared_lo},
        {"shared_range_hi", shared_hi},
        {"power_law_ks_shared", std::isnan(ks_pl) ? json() : json(ks_pl)},
        {"power_law_samples_shared", m_pl},
        {"power_law_score", std::isnan(score_pl) ? json() : json(score_pl)},
        {"stretched_exp_residual_shared", std::isnan(rms_se) ? json() : json(rms_se)},
        {"stretched_exp_bins_shared", bins_se},
        {"stretched_exp_score", std::isnan(score_se) ? json() : json(score_se)},
        {"stretched_exp_beta_pinned", beta_pinned},
        {"selected", outcome.selected}};
    if (power_law_error) outcome.diagnostics["power_law_error"] = *power_law_error;
    if (stretched_error) outcome.diagnostics["stretched_exp_error"] = *stretched_error;
    return outcome;
}

json tail_fit_json(const TailFitOutcome& outcome, std::size_t sample_count) {
    json doc;
    doc["model"] = outcome.selected;
    doc["sample_count"] = sample_count;
    if (outcome.power_law) doc["power_law"] = fit_to_json(*outcome.power_law);
    if (outcome.stretched) doc["stretched_exp"] = fit_to_json(*outcome.stretched);
    if (!outcome.diagnostics.is_null()) doc["auto"] = outcome.diagnostics;
    return doc;
}

json collapse_json(const CollapseReport& report) {
    json matrix = json::array();
    const std::size_t k = report.scales.size();
    for (std::size_t i = 0; i < k; ++i) {
        json row = json::array();
        for (std::size_t j = 0; j < k; ++j) row.push_back(report.pairwise_distance[i * k + j]);
        matrix.push_back(row);
    }
    return {{"scales", report.scales},
            {"pairwise_distance", matrix},
            {"max_distance", report.max_distance}};
}

// Stage harness: runs the body, and on failure writes the partial manifest
// with the stage name before rethrowing as an exit code.
class StagedRun {
  public:
    explicit StagedRun(fs::path out_dir) : out_(std::move(out_dir)) {}

    template <class F>
    void stage(const std::string& name, F&& body) {
        current_ = name;
        body();
    }

    Manifest& manifest() { return manifest_; }

    int finish() {
        manifest_.complete = true;
        manifest_.write(out_);
        return 0;
    }

    int fail(const std::exception& e) {
        manifest_.complete = false;
        manifest_.failed_stage = current_;
        manifest_.error = e.what();
        try {
            manifest_.write(out_);
        } catch (...) {
            // The manifest is best-effort once a stage has already failed.
        }
        std::cerr << "stage " << current_ << " failed: " << e.what() << "\n";
        return 1;
    }

  private:
    fs::path out_;
    Manifest manifest_;
    std::string current_ = "config";
};

}  // namespace

// ---------------------------------------------------------------------------
// subcommands

int run_ingest(const RunConfig& config) {
    config.validate();
    const fs::path out = prepare_out_dir(config);
    StagedRun run(out);
    try {
        json stats;
        PriceSeries merged;
        run.stage("ingest", [&] { merged = load_all(config, &stats); });
        run.stage("write", [&] {
            write_prices_csv(out / "prices.csv", merged);
            run.manifest().add("prices.csv", "ingest");
            write_json(out / "ingest.json", stats);
            run.manifest().add("ingest.json", "ingest");
        });
        std::cout << "ingested " << merged.size() << " samples across "
                  << merged.session_breaks.size() + 1 << " session(s) -> "
                  << (out / "prices.csv").string() << "\n";
        return run.finish();
    } catch (const std::exception& e) {
        return run.fail(e);
    }
}

int run_synth(const RunConfig& config) {
    config.validate();
    const fs::path out = prepare_out_dir(config);
    StagedRun run(out);
    try {
        SynthResult result;
        run.stage("synth", [&] {
            const VolatilityModel model = model_from_config(config);
            SynthSpec spec;
            spec.total_returns = config.total_returns;
            spec.window_length = config.window_length;
            spec.seed = config.seed;
            spec.base_interval = config.base_interval;
            result = generate(model, spec);

            write_prices_csv(out / "series.csv", result.prices);
            run.manifest().add("series.csv", "synth");

            std::ostringstream sig;
            sig << "window_start,sigma\n";
            for (std::size_t i = 0; i < result.epoch_sigmas.size(); ++i)
                sig << result.epoch_sigmas.window_starts[i] << ','
                    << fmt17(result.epoch_sigmas.sigmas[i]) << '\n';
            write_text(out / "epoch_sigmas.csv", sig.str());
            run.manifest().add("epoch_sigmas.csv", "synth");

            json params;
            params["model"] = config.model;
            for (const auto& [name, value] : model_from_config(config).parameters())
                params["parameters"][name] = value;
            params["window_length"] = config.window_length;
            params["total_returns"] = config.total_returns;
            params["seed"] = config.seed;
            params["base_interval"] = config.base_interval;
            params["epochs"] = result.epoch_sigmas.size();
            write_json(out / "true_params.json", params);
            run.manifest().add("true_params.json", "synth");
        });
        std::cout << "generated " << result.returns.size() << " returns ("
                  << result.epoch_sigmas.size() << " epochs) -> " << (out / "series.csv").string()
                  << "\n";
        return run.finish();
    } catch (const std::exception& e) {
        return run.fail(e);
    }
}

int run_fit_tail(const RunConfig& config) {
    config.validate();
    const fs::path out = prepare_out_dir(config);
    StagedRun run(out);
    try {
        std::vector<double> samples;
        run.stage("ingest", [&] {
            if (config.inputs.size() != 1)
                throw std::invalid_argument("fit-tail expects exactly one input file");
            // Column preference: the configured price column, then the names
            // our own artifacts use, then a single-column file.
            const fs::path path = config.inputs[0];
            if (!fs::exists(path)) throw std::runtime_error("no such file: " + path.string());
            for (const std::string& name : {config.price_column, std::string("sigma"),
                                            std::string("value"), std::string("")}) {
                try {
                    samples = read_numeric_column(path, name, config.delimiter[0]);
                    break;
                } catch (const std::runtime_error&) {
                    continue;
                }
            }
            if (samples.empty())
                throw std::runtime_error("no numeric column found in " + path.string());
            std::erase_if(samples, [](double v) { return !(v > 0.0); });
            if (samples.empty())
                throw std::runtime_error("no positive samples in " + path.string());
        });
        TailFitOutcome outcome;
        run.stage("tailfit", [&] {
            outcome = fit_tail_samples(samples, config);
            write_json(out / "tail_fit.json", tail_fit_json(outcome, samples.size()));
            run.manifest().add("tail_fit.json", "tailfit");
        });
        std::cout << "tail model: " << outcome.selected << "\n";
        if (outcome.selected == "power_law" && outcome.power_law) {
            std::cout << "alpha: " << json_number_string(outcome.power_law->alpha) << "\n"
                      << "x_min: " << json_number_string(outcome.power_law->x_min) << "\n"
                      << "ks_distance: " << json_number_string(outcome.power_law->ks_distance)
                      << "\n";
        } else if (outcome.stretched) {
            std::cout << "lambda: " << json_number_string(outcome.stretched->lambda) << "\n"
                      << "beta: " << json_number_string(outcome.stretched->beta) << "\n";
        }
        return run.finish();
    } catch (const std::exception& e) {
        return run.fail(e);
    }
}

int run_predict(const RunConfig& config) {
    config.validate();
    const fs::path out = prepare_out_dir(config);
    StagedRun run(out);
    try {
        run.stage("predict", [&] {
            const VolatilityModel model = model_from_config(config);
            const ScalingFunction scaling(model);

            // Grid: log-spaced around the model's own volatility scale,
            // unless an explicit range was given.
            double z_lo = config.fit_lo, z_hi = config.fit_hi;
            if (std::isnan(z_lo) || std::isnan(z_hi)) {
                double scale = model.support_lower();
                if (model.kind() == VolatilityKind::lognormal) {
                    const auto p = model.parameters();
                    scale = std::exp(p[0].second);  // median sigma
                }
                if (std::isnan(z_lo)) z_lo = scale / 100.0;
                if (std::isnan(z_hi)) z_hi = scale * 30.0;
            }

            std::ostringstream curve;
            curve << "z,density\n";
            curve << "0," << fmt17(scaling(0.0)) << '\n';
            const std::size_t points = 200;
            for (std::size_t i = 0; i < points; ++i) {
                const double f = static_cast<double>(i) / static_cast<double>(points - 1);
                const double z = z_lo * std::pow(z_hi / z_lo, f);
                curve << fmt17(z) << ',' << fmt17(scaling(z)) << '\n';
            }
            write_text(out / "scaling_function.csv", curve.str());
            run.manifest().add("scaling_function.csv", "predict");

            json doc;
            doc["model"] = config.model;
            for (const auto& [name, value] : model.parameters())
                doc["parameters"][name] = value;
            // Normalization diagnostic: 2 * integral over z >= 0 (F is even).
            // The outer tolerance stays looser than the inner evaluations'
            // 1e-8, otherwise their noise can never satisfy it.
            QuadratureSpec outer{1e-7, 20};
            const double norm =
                2.0 * integrate_semi_infinite([&](double z) { return scaling(z); }, 0.0, outer);
            doc["normalization"] = norm;
            if (model.kind() == VolatilityKind::pareto_tail)
                doc["tail_exponent"] = scaling.tail_exponent();
            if (model.kind() == VolatilityKind::stretched_exp) {
                const double onset = scaling.asymptotic_onset();
                const TailAsymptote asym = scaling.matched_asymptote(onset);
                doc["asymptote"] = {{"z_ref", asym.z_ref},
                                    {"log_amplitude", asym.log_amplitude},
                                    {"onset", onset}};
                std::ostringstream tail;
                tail << "z,asymptote,quadrature\n";
                for (std::size_t i = 0; i < 60; ++i) {
                    const double z = onset * std::pow(10.0, static_cast<double>(i) / 59.0);
                    tail << fmt17(z) << ',' << fmt17(asym.at(z)) << ',' << fmt17(scaling(z))
                         << '\n';
                }
                write_text(out / "asymptote.csv", tail.str());
                run.manifest().add("asymptote.csv", "predict");
            }
            write_json(out / "predict.json", doc);
            run.manifest().add("predict.json", "predict");

            std::cout << "normalization: " << json_number_string(norm) << "\n";
        });
        return run.finish();
    } catch (const std::exception& e) {
        return run.fail(e);
    }
}

int run_collapse(const RunConfig& config) {
    config.validate();
    const fs::path out = prepare_out_dir(config);
    StagedRun run(out);
    try {
        PriceSeries prices;
        run.stage("ingest", [&] { prices = load_all(config, nullptr); });
        CollapseReport report;
        run.stage("collapse", [&] {
            std::vector<std::vector<double>> rescaled;
            for (std::size_t n : config.scales) {
                const ReturnSeries rs = log_returns(prices, n, config.include_cross_session);
                rescaled.push_back(rescale_returns(rs.values, n));
            }
            report = collapse_metric(rescaled, config.scales);
            write_json(out / "collapse.json", collapse_json(report));
            run.manifest().add("collapse.json", "collapse");
        });
        std::cout << "collapse max_distance: " << json_number_string(report.max_distance) << "\n";
        return run.finish();
    } catch (const std::exception& e) {
        return run.fail(e);
    }
}

int run_analyze(const RunConfig& config) {
    config.validate();
    const fs::path out = prepare_out_dir(config);
    StagedRun run(out);
    try {
        json ingest_stats;
        PriceSeries prices;
        run.stage("ingest", [&] {
            prices = load_all(config, &ingest_stats);
            write_json(out / "ingest.json", ingest_stats);
            run.manifest().add("ingest.json", "ingest");
        });

        ReturnSeries base;
        run.stage("returns", [&] {
            base = log_returns(prices, 1, config.include_cross_session);
        });

        VolatilitySeries vols;
        Density vol_density;
        run.stage("volatility", [&] {
            vols = windowed_volatility(base, config.window_length);
            if (vols.size() == 0)
                throw std::runtime_error("no complete volatility window (window_length " +
                                         std::to_string(config.window_length) + ")");
            std::ostringstream sig;
            sig << "window_start,sigma\n";
            for (std::size_t i = 0; i < vols.size(); ++i)
                sig << vols.window_starts[i] << ',' << fmt17(vols.sigmas[i]) << '\n';
            write_text(out / "volatility.csv", sig.str());
            run.manifest().add("volatility.csv", "volatility");

            DensityOptions opts;
            opts.bin_count = config.bins;
            vol_density = empirical_density(vols.sigmas, opts);
            write_density_csv(out / "volatility_density.csv", vol_density);
            run.manifest().add("volatility_density.csv", "volatility");
        });

        std::vector<std::vector<double>> rescaled;
        run.stage("distribution", [&] {
            DensityOptions opts;
            opts.bin_count = config.bins;
            for (std::size_t n : config.scales) {
                const ReturnSeries rs = log_returns(prices, n, config.include_cross_session);
                const std::string suffix = "_n" + std::to_string(n) + ".csv";
                write_density_csv(out / ("returns_density" + suffix),
                                  empirical_density(rs.values, opts));
                run.manifest().add("returns_density" + suffix, "distribution");
                rescaled.push_back(rescale_returns(rs.values, n));
                write_density_csv(out / ("rescaled_density" + suffix),
                                  empirical_density(rescaled.back(), opts));
                run.manifest().add("rescaled_density" + suffix, "distribution");
            }
        });

        TailFitOutcome tail;
        run.stage("tailfit", [&] {
            tail = fit_tail_samples(vols.sigmas, config);
            write_json(out / "tail_fit.json", tail_fit_json(tail, vols.size()));
            run.manifest().add("tail_fit.json", "tailfit");
        });

        run.stage("predict", [&] {
            // Predicted rescaled-return density from the measured volatility
            // histogram pushed through the mixture integral.
            const VolatilityModel measured =
                VolatilityModel::empirical(vol_density.edges,
                                           std::vector<double>(vol_density.counts.begin(),
                                                               vol_density.counts.end()));
            const ScalingFunction scaling(measured);
            std::vector<double> all_abs;
            for (const auto& sample : rescaled)
                for (double v : sample)
                    if (std::abs(v) > 0.0) all_abs.push_back(std::abs(v));
            std::sort(all_abs.begin(), all_abs.end());
            const double z_lo = quantile_sorted(all_abs, 0.001);
            const double z_hi = all_abs.back();
            std::ostringstream curve;
            curve << "z,density\n";
            curve << "0," << fmt17(scaling(0.0)) << '\n';
            for (std::size_t i = 0; i < 200; ++i) {
                const double f = static_cast<double>(i) / 199.0;
                const double z = z_lo * std::pow(z_hi / z_lo, f);
                curve << fmt17(z) << ',' << fmt17(scaling(z)) << '\n';
            }
            write_text(out / "predicted_scaling_function.csv", curve.str());
            run.manifest().add("predicted_scaling_function.csv", "predict");
        });

        CollapseReport collapse;
        run.stage("collapse", [&] {
            collapse = collapse_metric(rescaled, config.scales);
            write_json(out / "collapse.json", collapse_json(collapse));
            run.manifest().add("collapse.json", "collapse");
        });

        run.stage("summary", [&] {
            json summary;
            summary["samples"] = prices.size();
            summary["sessions"] = prices.session_breaks.size() + 1;
            summary["base_returns"] = base.size();
            summary["window_length"] = config.window_length;
            summary["windows"] = vols.size();
            summary["scales"] = config.scales;
            summary["tail_fit"] = tail_fit_json(tail, vols.size());
            summary["collapse_max_distance"] = collapse.max_distance;
            write_json(out / "summary.json", summary);
            run.manifest().add("summary.json", "summary");

            std::ostringstream text;
            text << "samples: " << prices.size() << "\n";
            text << "sessions: " << prices.session_breaks.size() + 1 << "\n";
            text << "base returns: " << base.size() << "\n";
            text << "windows: " << vols.size() << " (window_length " << config.window_length
                 << ")\n";
            text << "tail model: " << tail.selected << "\n";
            if (tail.power_law) {
                text << "power_law alpha: " << json_number_string(tail.power_law->alpha) << "\n";
                text << "power_law x_min: " << json_number_string(tail.power_law->x_min) << "\n";
                text << "power_law ks_distance: "
                     << json_number_string(tail.power_law->ks_distance) << "\n";
            }
            if (tail.stretched) {
                text << "stretched_exp lambda: " << json_number_string(tail.stretched->lambda)
                     << "\n";
                text << "stretched_exp beta: " << json_number_string(tail.stretched->beta)
                     << "\n";
            }
            text << "collapse max_distance: " << json_number_string(collapse.max_distance)
                 << "\n";
            write_text(out / "summary.txt", text.str());
            run.manifest().add("summary.txt", "summary");
            std::cout << text.str();
        });

        return run.finish();
    } catch (const std::exception& e) {
        return run.fail(e);
    }
}

}  // namespace volmix::cli
