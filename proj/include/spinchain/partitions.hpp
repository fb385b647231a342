#pragma once

#include <array>
#include <functional>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "spinchain/entropy.hpp"
#include "spinchain/propagate.hpp"

namespace spinchain {

/// Three pairwise disjoint, nonempty subsystems; D is the complement.
/// Canonical form has a < b < c as integers, so each unordered triple
/// has one representative.
struct PartitionTriple {
    Mask a = 0, b = 0, c = 0;

    /// Sorts the masks; throws ArgumentError if empty or overlapping.
    [[nodiscard]] static PartitionTriple canonical(Mask x, Mask y, Mask z);

    [[nodiscard]] Mask               abc() const noexcept { return a | b | c; }
    [[nodiscard]] bool               is_canonical() const noexcept { return a < b && b < c; }
    [[nodiscard]] std::array<SiteSubset, 3> subsets() const noexcept { return {SiteSubset{a}, SiteSubset{b}, SiteSubset{c}}; }

    bool operator==(const PartitionTriple &) const = default;
    auto operator<=>(const PartitionTriple &) const = default;
};

/// Every site assigned to one of A, B, C, D with A, B, C nonempty and D
/// possibly empty.
struct AllAssignments {};
/// The chain cut into 3 or 4 consecutive nonempty blocks; A, B, C are the
/// first three.
struct ContiguousBlocks {};
/// All assignments with the given subsystem sizes (as a multiset).
struct FixedSizes {
    int a = 1, b = 1, c = 1;
};
using PartitionStrategy = std::variant<AllAssignments, ContiguousBlocks, FixedSizes>;

inline constexpr int kAllAssignmentsMaxSites = 16;

[[nodiscard]] std::string describe(const PartitionStrategy &s);

/// Four equal connected quarters; returns the first three.
[[nodiscard]] PartitionTriple contiguous_quarters(int n_sites);

/// Calls fn for each canonical triple in increasing (a, b, c) order.
/// Throws CapacityError for AllAssignments beyond kAllAssignmentsMaxSites.
void for_each_partition(int n_sites, const PartitionStrategy &strategy, const std::function<void(const PartitionTriple &)> &fn);

[[nodiscard]] std::vector<PartitionTriple> enumerate_partitions(int n_sites, const PartitionStrategy &strategy);

/// Closed-form count of canonical AllAssignments triples:
/// (4^N - 3*3^N + 3*2^N - 1) / 6.
[[nodiscard]] std::uint64_t all_assignments_count(int n_sites);

struct TmiExtrema {
    double          min = 0;
    PartitionTriple argmin;
    double          max = 0;
    PartitionTriple argmax;
};

/// Exact extrema over the list. Ties resolve to the earliest entry.
[[nodiscard]] TmiExtrema minmax_tmi(const SubsetEntropyTable &table, std::span<const PartitionTriple> partitions);

/// Same extrema without materializing the list; serial, in enumeration order.
[[nodiscard]] TmiExtrema minmax_tmi(const SubsetEntropyTable &table, const PartitionStrategy &strategy);

struct SeriesMeta {
    std::optional<double> alpha;
    bool                  nn_limit = false;
    int                   n_sites  = 0;
    std::string           strategy;
};

/// TMI along a time grid: a scalar track for a single partition and/or a
/// min/max track over a partition set.
struct TmiSeries {
    TimeGrid                grid;
    std::vector<double>     values;
    std::vector<TmiExtrema> extrema;
    SeriesMeta              meta;

    /// Checks track lengths against the grid and min <= max.
    void validate() const;
};

inline constexpr double kTauNoiseFloor = 1e-10;

/// First time the min-TMI track drops below -threshold, linearly
/// interpolated between the bracketing grid points; nullopt when it never
/// does. A track that starts at zero and is negative at the next sample
/// gives tau equal to the first grid time.
[[nodiscard]] std::optional<double> tau_sign_change(const TmiSeries &series, double threshold = 0.0);

/// Minimal site distance between two disjoint nonempty masks.
[[nodiscard]] int min_distance(Mask x, Mask y);

/// r / v_LR with v_LR = 4 j0 and r the largest of the three pairwise
/// minimal distances between A, B and C.
[[nodiscard]] double lightcone_onset(const ModelSpec &spec, const PartitionTriple &p);

} // namespace spinchain
