#pragma once

#include <cstdint>
#include <filesystem>
#include <limits>
#include <string>
#include <vector>

namespace volmix::cli {

/// Everything a subcommand needs; flags mirror these fields and a key=value
/// config file can preload them (flags win).
struct RunConfig {
    std::vector<std::string> inputs;

    // ingest
    std::string timestamp_column = "timestamp";
    std::string price_column = "close";
    std::string delimiter = ",";
    std::int64_t base_interval = 60;  // seconds
    bool strict_timestamps = false;
    bool include_cross_session = false;

    // analysis
    std::size_t window_length = 390;
    std::vector<std::size_t> scales = {5, 15, 30, 60};
    std::string tail_model = "auto";  // power_law | stretched_exp | auto
    // Tail fit range on the fitted variable (|r| or sigma); NaN = automatic.
    double fit_lo = std::numeric_limits<double>::quiet_NaN();
    double fit_hi = std::numeric_limits<double>::quiet_NaN();
    std::size_t bins = 60;

    // model (synth and predict)
    std::string model = "lognormal";
    std::vector<double> model_params = {0.0, 0.5};
    std::size_t total_returns = 0;
    std::uint64_t seed = 1;

    std::string out_dir;

    /// Throws std::invalid_argument naming the offending field.
    void validate() const;
};

/// key = value lines; '#' starts a comment; unknown keys are an error.
/// Returns the defaults overlaid with the file's assignments.
RunConfig load_config_file(const std::filesystem::path& path);
/// Apply one key=value assignment (shared by file loader and tests).
void apply_config_entry(RunConfig& config, const std::string& key, const std::string& value);

/// Artifact ledger written as manifest.json under out_dir. Every artifact
/// records which pipeline stage produced it; when a stage throws, the
/// manifest is still written with complete=false and the stage name so
/// partial outputs stay interpretable.
struct Manifest {
    struct Entry {
        std::string path;   // relative to out_dir
        std::string stage;  // ingest | returns | volatility | distribution | tailfit | predict | collapse | synth | summary
    };
    std::vector<Entry> entries;
    bool complete = false;
    std::string failed_stage;
    std::string error;

    void add(const std::string& relative_path, const std::string& stage);
    void write(const std::filesystem::path& out_dir) const;
};

// Subcommand entry points: return a process exit status, write artifacts
// under config.out_dir, and name the failing stage on stderr.
int run_ingest(const RunConfig& config);
int run_analyze(const RunConfig& config);
int run_fit_tail(const RunConfig& config);
int run_predict(const RunConfig& config);
int run_synth(const RunConfig& config);
int run_collapse(const RunConfig& config);

/// Shortest round-trip decimal form of x, identical to the representation
/// nlohmann::json serializes — the summary report reuses it so the numbers
/// in summary.txt match the JSON artifacts byte for byte.
std::string json_number_string(double x);

}  // namespace volmix::cli
