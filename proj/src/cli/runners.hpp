#pragma once

#include <optional>
#include <string>
#include <vector>

#include "config.hpp"
#include "dataset.hpp"

namespace spinchain::cli {

struct RunOutput {
    std::vector<Dataset>       datasets;
    std::vector<std::string>   summary;  // human-readable lines for stdout
    std::optional<std::string> failure;  // numerical-consistency failure, if any
};

/// Provenance block shared by every dataset of a run.
[[nodiscard]] Json provenance(const RunConfig &cfg, Command cmd);

/// TMI of one partition on the (alpha, t) grid with the light-cone overlay.
[[nodiscard]] RunOutput run_tmi_grid(const RunConfig &cfg);
/// TMI of one partition and the half-chain entropy per alpha.
[[nodiscard]] RunOutput run_tmi_vs_entropy(const RunConfig &cfg);
/// Min/max TMI over a partition set per time, the largest max-TMI and tau per alpha.
[[nodiscard]] RunOutput run_minmax_scan(const RunConfig &cfg);
/// Single-excitation scan: min/max TMI, occupation weights, dual-pipeline spot check.
[[nodiscard]] RunOutput run_onebody_scan(const RunConfig &cfg);
/// Oracle suites against full 2^N-space references.
[[nodiscard]] RunOutput run_validate(const RunConfig &cfg);

[[nodiscard]] RunOutput run(Command cmd, const RunConfig &cfg);

} // namespace spinchain::cli
