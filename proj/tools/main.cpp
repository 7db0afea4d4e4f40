#include <functional>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "volmix/cli.hpp"

namespace {

using volmix::cli::RunConfig;

// Register the shared flag set on a subcommand, bound straight into config.
// Values preloaded from --config keep acting as defaults: a flag only
// overwrites its field when actually given.
void add_common_options(CLI::App* cmd, RunConfig& config, std::string& config_path) {
    cmd->add_option("--config", config_path,
                    "key = value config file (flags override its entries)");
    cmd->add_option("-i,--input", config.inputs, "input file(s)");
    cmd->add_option("--out", config.out_dir, "output directory for artifacts + manifest.json");
    cmd->add_option("--timestamp-column", config.timestamp_column, "timestamp column name");
    cmd->add_option("--price-column", config.price_column, "price column name");
    cmd->add_option("--delimiter", config.delimiter, "field delimiter (single character)");
    cmd->add_option("--base-interval", config.base_interval, "sample spacing in seconds");
    cmd->add_flag("--strict-timestamps", config.strict_timestamps,
                  "reject unsorted timestamps instead of sorting");
    cmd->add_flag("--include-cross-session", config.include_cross_session,
                  "let returns and windows span session breaks");
    cmd->add_option("--window-length", config.window_length,
                    "returns per volatility window/epoch");
    cmd->add_option("--scales", config.scales, "aggregation levels, e.g. 5,15,30,60")
        ->delimiter(',');
    cmd->add_option("--tail-model", config.tail_model, "power_law | stretched_exp | auto");
    cmd->add_option("--fit-lo", config.fit_lo, "tail fit range lower bound");
    cmd->add_option("--fit-hi", config.fit_hi, "tail fit range upper bound");
    cmd->add_option("--bins", config.bins, "histogram bin count");
    cmd->add_option("--model", config.model,
                    "volatility model: point_mass | pareto_tail | stretched_exp | lognormal");
    cmd->add_option("--model-params", config.model_params,
                    "model parameters, e.g. pareto_tail: alpha,sigma_min")
        ->delimiter(',');
    cmd->add_option("--total-returns", config.total_returns,
                    "synth: number of returns to generate");
    cmd->add_option("--seed", config.seed, "synth RNG seed");
}

}  // namespace

int main(int argc, char** argv) {
    RunConfig config;
    std::string config_path;

    // Load --config before binding flags, so file entries become the
    // defaults the flags override.
    for (int i = 1; i + 1 < argc; ++i) {
        if (std::string(argv[i]) == "--config") {
            try {
                config = volmix::cli::load_config_file(argv[i + 1]);
            } catch (const std::exception& e) {
                std::cerr << "stage config failed: " << e.what() << "\n";
                return 2;
            }
            break;
        }
    }

    CLI::App app{"volatility-mixture analysis of financial return distributions"};
    app.require_subcommand(1);

    std::function<int(const RunConfig&)> action;
    const auto register_cmd = [&](const std::string& name, const std::string& desc,
                                  int (*fn)(const RunConfig&)) {
        CLI::App* cmd = app.add_subcommand(name, desc);
        add_common_options(cmd, config, config_path);
        cmd->callback([&action, fn] { action = fn; });
        return cmd;
    };

    register_cmd("ingest", "load price files into one canonical CSV", volmix::cli::run_ingest);
    register_cmd("analyze",
                 "full pipeline: returns, volatility, fits, prediction, collapse, summary",
                 volmix::cli::run_analyze);
    register_cmd("fit-tail", "fit tail model(s) to a sample column", volmix::cli::run_fit_tail);
    register_cmd("predict", "evaluate the model's rescaled return density on a grid",
                 volmix::cli::run_predict);
    register_cmd("synth", "generate a synthetic price series from a volatility model",
                 volmix::cli::run_synth);
    register_cmd("collapse", "multi-scale rescaled-distribution collapse report",
                 volmix::cli::run_collapse);

    CLI11_PARSE(app, argc, argv);

    try {
        return action(config);
    } catch (const std::exception& e) {
        std::cerr << "stage config failed: " << e.what() << "\n";
        return 2;
    }
}
