#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "spinchain/partitions.hpp"
#include "spinchain/propagate.hpp"

namespace spinchain::cli {

/// Raw key -> value pairs. Keys are the long flag names without dashes
/// ("n-sites", "alpha", ...), so a config file and the command line share
/// one vocabulary.
using KeyValues = std::map<std::string, std::string>;

/// Parses the config grammar:
///   # comment          (also ';' comments)
///   [section]          (grouping only; keys are global)
///   key = value
/// Throws ConfigError with the line number on malformed input or unknown keys.
[[nodiscard]] KeyValues parse_config_text(const std::string &text, const std::string &origin = "<config>");
[[nodiscard]] KeyValues load_config_file(const std::string &path);

/// All recognised keys.
[[nodiscard]] const std::vector<std::string> &known_keys();

enum class InitialKind { Neel, SingleExcitation };

/// A single partition for the scalar-TMI runs, or a strategy for scans.
struct PartitionSelection {
    enum class Kind { Quarters, Triple, Strategy } kind = Kind::Quarters;
    PartitionTriple   triple;
    PartitionStrategy strategy = AllAssignments{};

    [[nodiscard]] std::string describe() const;
};

struct RunConfig {
    int                      n_sites = 12;
    double                   j0      = 1.0;
    std::vector<ModelSpec>   models; // one per alpha (or nn limit)
    InitialKind              initial = InitialKind::Neel;
    int                      site    = -1; // single excitation site; -1 = N/2
    double                   t_max   = 0;
    int                      n_points = 201;
    bool                     kac      = false;
    PartitionSelection       partitions;
    EngineOptions            engine;
    double                   tau_threshold = kTauNoiseFloor;
    std::string              export_tables = "none"; // none | csv | bin
    std::uint64_t            seed          = 12345;
    std::string              out_dir       = "out";
    std::vector<std::string> formats{"csv"};

    [[nodiscard]] TimeGrid grid() const { return TimeGrid::uniform(t_max, n_points, kac); }
    [[nodiscard]] int      excitation_site() const { return site >= 0 ? site : n_sites / 2; }

    /// Stable text form of every resolved field; hashed for provenance.
    [[nodiscard]] std::string   canonical() const;
    [[nodiscard]] std::uint64_t hash() const;
};

/// Which subcommand the config is for; controls defaults.
enum class Command { TmiGrid, TmiVsEntropy, MinmaxScan, OnebodyScan, Validate };

[[nodiscard]] const char *command_name(Command c) noexcept;

/// Resolves key/values into a validated RunConfig. Field-level problems
/// throw ConfigError naming the key.
[[nodiscard]] RunConfig resolve_config(const KeyValues &kv, Command cmd);

/// Parses "0.3, 0.5, nn" style lists; "nn" / "inf" mean the nearest-neighbour limit.
[[nodiscard]] std::vector<std::optional<double>> parse_alpha_list(const std::string &text);

[[nodiscard]] PartitionSelection parse_partitions(const std::string &text, int n_sites);

} // namespace spinchain::cli
