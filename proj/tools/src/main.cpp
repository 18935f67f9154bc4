#include <iostream>
#include <map>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "commands.hpp"
#include "config.hpp"

namespace {

using adagrow::cli::CliError;
using adagrow::cli::ConfigFile;
using adagrow::cli::OptionSource;

struct KeyDesc {
    const char* name;
    const char* desc;
};

// Every config key doubles as a flag; a given flag wins over the manifest.
void add_key_flags(CLI::App* sub, std::map<std::string, std::string>& sink,
                   const std::vector<KeyDesc>& keys) {
    for (const auto& key : keys)
        sub->add_option_function<std::string>(
            std::string("--") + key.name,
            [&sink, name = std::string(key.name)](const std::string& v) {
                sink[name] = v;
            },
            key.desc);
}

const std::vector<KeyDesc> kBoundKeys = {
    {"method", "comma-separated methods (default ours-n,ours-u,jlnrss,jlnrss-plus,split)"},
    {"alpha", "accuracy target for k_max mode (default 0.1)"},
    {"beta-prime", "coverage failure budget in (0,1) (default 0.05)"},
    {"n", "final dataset size grid, comma-separated (required)"},
    {"n0", "initial dataset size (fixed rule)"},
    {"growth-ratio", "n/n0 when n0 is not fixed (default 3)"},
    {"b", "batch count grid (default 1)"},
    {"k", "query count grid; given = alpha' rows, absent = k_max rows"},
    {"seed", "optimizer seed (default 1)"},
    {"out", "CSV output path"},
    {"svg", "SVG chart output path"},
    {"restarts", "optimizer restarts per point (default 32)"},
    {"rho", "privacy budget for the adaptive method"},
    {"axis", "chart x axis: n, b, or k (default: the multi-valued grid)"},
};

const std::vector<KeyDesc> kSimulateKeys = {
    {"n", "final dataset size (exactly one value)"},
    {"n0", "initial dataset size (fixed rule)"},
    {"growth-ratio", "n/n0 when n0 is not fixed (default 3)"},
    {"k", "total query count (required)"},
    {"b", "batch count for the fixed analyst (default: one per round)"},
    {"sigma", "noise scale of the Gaussian mechanism (required)"},
    {"clipped", "clamp responses to [0,1] (default true)"},
    {"analyst", "fixed or attack (default fixed)"},
    {"queries", "fixed-analyst query family: binary or boundary (default binary)"},
    {"domain-size", "uniform data domain size (default 16)"},
    {"weights", "explicit domain weights, comma-separated (overrides domain-size)"},
    {"final-fraction", "attack: placement of the final query in (0,1] (default 1)"},
    {"filter-rho", "wrap the mechanism in a privacy filter with this budget"},
    {"trials", "independent trials (default 1)"},
    {"seed", "simulation seed (default 1)"},
    {"out", "per-round error CSV path"},
    {"transcript-out", "per-exchange response CSV path"},
    {"bound", "method whose alpha' is printed alongside (fixed analyst)"},
    {"beta-prime", "budget for the bound envelope (default 0.05)"},
    {"restarts", "optimizer restarts for the bound envelope (default 32)"},
};

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{
        "Worst-case accuracy guarantees for adaptively chosen statistical "
        "queries on growing datasets"};
    app.set_version_flag("--version", "adagrow 0.1.0");
    app.require_subcommand(1);

    std::map<std::string, std::string> flags;
    std::string config_path;

    auto* bound = app.add_subcommand(
        "bound", "alpha' or k_max rows for (method, n, b[, k]) points");
    auto* sweep = app.add_subcommand(
        "sweep", "grid sweep to CSV in a fixed schema, optional SVG chart");
    auto* simulate = app.add_subcommand(
        "simulate", "run analyst-mechanism interactions, report errors");
    app.add_subcommand("validate", "run the built-in correctness oracles");

    for (auto* sub : {bound, sweep}) {
        sub->add_option("--config", config_path, "experiment manifest path");
        add_key_flags(sub, flags, kBoundKeys);
    }
    simulate->add_option("--config", config_path, "experiment manifest path");
    add_key_flags(simulate, flags, kSimulateKeys);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int rc = app.exit(e);
        return rc == 0 ? 0 : 2;
    }

    std::string command = app.get_subcommands().front()->get_name();
    try {
        ConfigFile config;
        if (!config_path.empty())
            config = ConfigFile::parse_file(config_path);
        OptionSource src(std::move(config), command);
        for (const auto& [key, value] : flags) src.set_flag(key, value);

        int rc = 0;
        if (command == "bound")
            rc = adagrow::cli::run_bound(src);
        else if (command == "sweep")
            rc = adagrow::cli::run_sweep(src);
        else if (command == "simulate")
            rc = adagrow::cli::run_simulate(src);
        else
            rc = adagrow::cli::run_validate(std::cout);

        for (const auto& key : src.unused_keys())
            std::cerr << "warning: config key '" << key << "' is not used by '"
                      << command << "'\n";
        return rc;
    } catch (const CliError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return e.exit_code();
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
}
