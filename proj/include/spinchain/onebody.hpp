#pragma once

#include <span>
#include <vector>

#include "spinchain/partitions.hpp"

namespace spinchain {

/// Probabilities of finding the single excitation inside A, B and C.
struct OccupationWeights {
    double p_a = 0, p_b = 0, p_c = 0;
};

/// Values within this distance of 0 or 1 snap to the endpoint.
inline constexpr double kProbabilitySnap = 1e-12;

/// H(p) = -p log2 p - (1-p) log2(1-p); throws ArgumentError outside [0, 1].
[[nodiscard]] double binary_entropy(double p);

/// p_X = sum_{m in X} |c_m|^2. c must be normalized to 1e-10 and the
/// subsets pairwise disjoint.
[[nodiscard]] OccupationWeights occupation_weights(std::span<const cplx> c, SiteSubset a, SiteSubset b, SiteSubset c_set);

/// TMI of a single-excitation state as a function of the occupation
/// weights alone:
///   H(pA) + H(pB) + H(pC) + H(pA+pB+pC) - H(pA+pB) - H(pA+pC) - H(pB+pC).
/// Exactly zero on the boundary (some p = 0, or pA+pB+pC = 1).
[[nodiscard]] double tmi_binary(const OccupationWeights &w);

struct OnebodyScan {
    TmiSeries                        series;      // min/max per time
    double                           global_min = 0;
    std::size_t                      min_time_index = 0;
    PartitionTriple                  min_partition;
    std::vector<std::vector<double>> occupations; // [time][site] = |c_m(t)|^2
};

/// Evolves a single excitation at `site` with the closed-form propagator
/// and evaluates tmi_binary for every partition at every grid time.
[[nodiscard]] OnebodyScan onebody_tmi_scan(const CouplingMatrix &coupling, int site, const TimeGrid &grid, std::span<const PartitionTriple> partitions);

} // namespace spinchain
