#include <CLI11.hpp>
#include <fmt/format.h>
#include <iostream>

#include "runners.hpp"

using namespace spinchain;
using namespace spinchain::cli;

namespace {

enum Exit { kOk = 0, kOther = 1, kConfig = 2, kCapacity = 3, kNumerical = 4 };

struct Flags {
    std::string                config;
    std::map<std::string, std::string> values;
    bool                       nn_limit = false, kac = false, no_kac = false, paper_scale = false;
};

void add_run_flags(CLI::App *sub, Flags &f) {
    sub->add_option("--config", f.config, "Config file (key = value)");
    const std::vector<std::pair<std::string, std::string>> opts{
        {"n-sites", "Chain length N"},
        {"j0", "Coupling scale"},
        {"alpha", "Comma-separated exponents; 'nn' for the nearest-neighbour limit"},
        {"t-max", "End of the time window (Kac-rescaled when --kac)"},
        {"n-points", "Number of time samples including t = 0"},
        {"engine", "auto | dense | krylov"},
        {"krylov-tol", "Krylov per-step error bound"},
        {"krylov-m-max", "Largest Krylov subspace"},
        {"dense-threshold", "Largest sector dimension for the dense engine"},
        {"partitions", "quarters | triple:A/B/C | all | contiguous | sizes:a,b,c"},
        {"initial-state", "neel | single"},
        {"site", "Site of the single excitation (default N/2)"},
        {"tau-threshold", "Min-TMI level that defines tau"},
        {"seed", "Seed for the cross-check sampling"},
        {"export-tables", "none | csv | bin entropy-table dumps (minmax-scan)"},
        {"out", "Output directory"},
        {"format", "csv | json | csv,json"},
    };
    for(const auto &[key, help] : opts) {
        sub->add_option_function<std::string>("--" + key, [&f, key](const std::string &v) { f.values[key] = v; }, help);
    }
    sub->add_flag("--nn-limit", f.nn_limit, "Add the nearest-neighbour limit to the alpha list");
    sub->add_flag("--kac", f.kac, "Kac-rescaled time axis");
    sub->add_flag("--no-kac", f.no_kac, "Physical time axis");
    sub->add_flag("--paper-scale", f.paper_scale, "Use the config's paper-n-sites");
}

KeyValues merged(const Flags &f) {
    KeyValues kv = f.config.empty() ? KeyValues{} : load_config_file(f.config);
    for(const auto &[k, v] : f.values) kv[k] = v;
    if(f.nn_limit) kv["nn-limit"] = "true";
    if(f.kac && f.no_kac) throw ConfigError("--kac and --no-kac are mutually exclusive");
    if(f.kac) kv["kac"] = "true";
    if(f.no_kac) kv["kac"] = "false";
    if(f.paper_scale) kv["paper-scale"] = "true";
    return kv;
}

} // namespace

int main(int argc, char **argv) {
    CLI::App app{"Quench dynamics and tripartite information of long-range XY chains"};
    app.require_subcommand(1);
    app.set_version_flag("--version", SPINCHAIN_VERSION);

    Flags                                   flags;
    const std::vector<std::pair<Command, std::string>> commands{
        {Command::TmiGrid, "TMI of one partition on the (alpha, t) grid"},
        {Command::TmiVsEntropy, "TMI and half-chain entropy per alpha"},
        {Command::MinmaxScan, "Min/max TMI over all partitions, tau per alpha"},
        {Command::OnebodyScan, "Single-excitation TMI scan with nonnegativity check"},
        {Command::Validate, "Oracle suites against full-space references"},
    };
    std::map<CLI::App *, Command> by_app;
    for(const auto &[cmd, help] : commands) {
        auto *sub = app.add_subcommand(command_name(cmd), help);
        add_run_flags(sub, flags);
        by_app[sub] = cmd;
    }

    try {
        app.parse(argc, argv);
    } catch(const CLI::ParseError &e) {
        const int rc = app.exit(e);
        return rc == 0 ? kOk : kConfig;
    }

    try {
        const Command cmd = by_app.at(app.get_subcommands().front());
        const auto    cfg = resolve_config(merged(flags), cmd);
        const auto    out = run(cmd, cfg);
        for(const auto &d : out.datasets)
            for(const auto &path : write_dataset(d, cfg.out_dir, cfg.formats)) fmt::print("wrote {}\n", path.string());
        for(const auto &line : out.summary) fmt::print("{}\n", line);
        if(out.failure) {
            fmt::print(stderr, "numerical-consistency failure: {}\n", *out.failure);
            return kNumerical;
        }
        return kOk;
    } catch(const ConfigError &e) {
        fmt::print(stderr, "config error: {}\n", e.what());
        return kConfig;
    } catch(const CapacityError &e) {
        fmt::print(stderr, "capacity guard: {}\n", e.what());
        return kCapacity;
    } catch(const NumericalError &e) {
        fmt::print(stderr, "numerical-consistency failure: {}\n", e.what());
        return kNumerical;
    } catch(const ConvergenceError &e) {
        fmt::print(stderr, "numerical-consistency failure: {}\n", e.what());
        return kNumerical;
    } catch(const ArgumentError &e) {
        fmt::print(stderr, "config error: {}\n", e.what());
        return kConfig;
    } catch(const std::exception &e) {
        fmt::print(stderr, "error: {}\n", e.what());
        return kOther;
    }
}
