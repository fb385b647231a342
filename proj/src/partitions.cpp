#include "spinchain/partitions.hpp"

#include <algorithm>
#include <cmath>
#include <fmt/format.h>

#include "spinchain/parallel.hpp"

namespace spinchain {

PartitionTriple PartitionTriple::canonical(Mask x, Mask y, Mask z) {
    if(!x || !y || !z) throw ArgumentError("partition subsystems must be nonempty");
    if((x & y) || (x & z) || (y & z)) throw ArgumentError("partition subsystems must be disjoint");
    std::array<Mask, 3> v{x, y, z};
    std::sort(v.begin(), v.end());
    return {v[0], v[1], v[2]};
}

std::string describe(const PartitionStrategy &s) {
    return std::visit(
        [](const auto &v) -> std::string {
            using T = std::decay_t<decltype(v)>;
            if constexpr(std::is_same_v<T, AllAssignments>) return "all";
            else if constexpr(std::is_same_v<T, ContiguousBlocks>) return "contiguous";
            else return fmt::format("sizes:{},{},{}", v.a, v.b, v.c);
        },
        s);
}

PartitionTriple contiguous_quarters(int n_sites) {
    if(n_sites < 4 || n_sites % 4 != 0 || n_sites > kMaxSites)
        throw ArgumentError(fmt::format("contiguous quarters need N divisible by 4, got {}", n_sites));
    const int w = n_sites / 4;
    return {SiteSubset::range(0, w).bits, SiteSubset::range(w, 2 * w).bits, SiteSubset::range(2 * w, 3 * w).bits};
}

std::uint64_t all_assignments_count(int n_sites) {
    if(n_sites < 0 || n_sites > 30) throw ArgumentError("n_sites out of range");
    auto p = [n_sites](std::uint64_t base) {
        unsigned __int128 r = 1;
        for(int i = 0; i < n_sites; ++i) r *= base;
        return r;
    };
    const unsigned __int128 num = p(4) + 3 * p(2) - 3 * p(3) - 1;
    return static_cast<std::uint64_t>(num / 6);
}

namespace {

/// Next nonzero submask of m above s in increasing order; 0 when done.
inline Mask next_submask(Mask s, Mask m) noexcept { return (s - m) & m; }

template<class SizeFilter>
void for_each_ordered(int n_sites, SizeFilter &&accept, const std::function<void(const PartitionTriple &)> &fn) {
    const Mask all = full_mask(n_sites);
    for(Mask a = 1; a <= all; ++a) {
        if(!accept(popcount(a), -1, -1)) continue;
        const Mask rest = all & ~a;
        for(Mask b = next_submask(0, rest); b != 0; b = next_submask(b, rest)) {
            if(b <= a || !accept(popcount(a), popcount(b), -1)) continue;
            const Mask rest2 = rest & ~b;
            for(Mask c = next_submask(0, rest2); c != 0; c = next_submask(c, rest2)) {
                if(c <= b || !accept(popcount(a), popcount(b), popcount(c))) continue;
                fn(PartitionTriple{a, b, c});
            }
        }
    }
}

} // namespace

void for_each_partition(int n_sites, const PartitionStrategy &strategy, const std::function<void(const PartitionTriple &)> &fn) {
    if(n_sites < 3 || n_sites > kMaxSites) throw ArgumentError(fmt::format("n_sites {} out of range for partitions", n_sites));
    if(std::holds_alternative<AllAssignments>(strategy)) {
        if(n_sites > kAllAssignmentsMaxSites)
            throw CapacityError(fmt::format("AllAssignments limited to N <= {}, got {}", kAllAssignmentsMaxSites, n_sites));
        for_each_ordered(n_sites, [](int, int, int) { return true; }, fn);
    } else if(std::holds_alternative<ContiguousBlocks>(strategy)) {
        for(int i = 1; i <= n_sites - 2; ++i)
            for(int j = i + 1; j <= n_sites - 1; ++j)
                for(int l = j + 1; l <= n_sites; ++l)
                    fn(PartitionTriple{SiteSubset::range(0, i).bits, SiteSubset::range(i, j).bits, SiteSubset::range(j, l).bits});
    } else {
        const auto &fs = std::get<FixedSizes>(strategy);
        if(fs.a < 1 || fs.b < 1 || fs.c < 1 || fs.a + fs.b + fs.c > n_sites)
            throw ArgumentError(fmt::format("invalid sizes ({}, {}, {}) for N = {}", fs.a, fs.b, fs.c, n_sites));
        std::array<int, 3> want{fs.a, fs.b, fs.c};
        std::sort(want.begin(), want.end());
        auto accept = [&](int x, int y, int z) {
            std::array<int, 3> left = want;
            for(int s : {x, y, z}) {
                if(s < 0) return true;
                auto it = std::find(left.begin(), left.end(), s);
                if(it == left.end()) return false;
                *it = -1;
            }
            return true;
        };
        for_each_ordered(n_sites, accept, fn);
    }
}

std::vector<PartitionTriple> enumerate_partitions(int n_sites, const PartitionStrategy &strategy) {
    std::vector<PartitionTriple> out;
    if(std::holds_alternative<AllAssignments>(strategy) && n_sites <= kAllAssignmentsMaxSites && n_sites >= 3)
        out.reserve(all_assignments_count(n_sites));
    for_each_partition(n_sites, strategy, [&](const PartitionTriple &p) { out.push_back(p); });
    return out;
}

namespace {

struct Partial {
    double      min = INFINITY, max = -INFINITY;
    std::size_t imin = 0, imax = 0;
};

} // namespace

TmiExtrema minmax_tmi(const SubsetEntropyTable &table, std::span<const PartitionTriple> partitions) {
    if(partitions.empty()) throw ArgumentError("minmax_tmi needs a nonempty partition list");
    const Mask all = full_mask(table.n_sites());
    for(const auto &p : {partitions.front(), partitions.back()})
        if(p.abc() & ~all) throw ArgumentError("partition exceeds the table's site count");

    const std::size_t    blocks = std::min<std::size_t>(64, partitions.size());
    std::vector<Partial> part(blocks);
    parallel_blocks(partitions.size(), blocks, [&](std::size_t blk, std::size_t lo, std::size_t hi) {
        Partial r;
        if(table.complete()) {
            const auto s = table.entries();
            for(std::size_t i = lo; i < hi; ++i) {
                const auto  &p = partitions[i];
                const double v = tmi_lookup(s, p.a, p.b, p.c);
                if(v < r.min) r.min = v, r.imin = i;
                if(v > r.max) r.max = v, r.imax = i;
            }
        } else {
            for(std::size_t i = lo; i < hi; ++i) {
                const auto  &p = partitions[i];
                const double v = table(p.a) + table(p.b) + table(p.c) - table(p.a | p.b) - table(p.a | p.c) - table(p.b | p.c) + table(p.abc());
                if(v < r.min) r.min = v, r.imin = i;
                if(v > r.max) r.max = v, r.imax = i;
            }
        }
        part[blk] = r;
    });
    // blocks are in list order; strict comparisons keep the earliest tie
    Partial best = part[0];
    for(std::size_t b = 1; b < blocks; ++b) {
        if(part[b].min < best.min) best.min = part[b].min, best.imin = part[b].imin;
        if(part[b].max > best.max) best.max = part[b].max, best.imax = part[b].imax;
    }
    return {best.min, partitions[best.imin], best.max, partitions[best.imax]};
}

TmiExtrema minmax_tmi(const SubsetEntropyTable &table, const PartitionStrategy &strategy) {
    TmiExtrema r{INFINITY, {}, -INFINITY, {}};
    bool       any = false;
    for_each_partition(table.n_sites(), strategy, [&](const PartitionTriple &p) {
        const double v = table(p.a) + table(p.b) + table(p.c) - table(p.a | p.b) - table(p.a | p.c) - table(p.b | p.c) + table(p.abc());
        if(v < r.min) r.min = v, r.argmin = p;
        if(v > r.max) r.max = v, r.argmax = p;
        any = true;
    });
    if(!any) throw ArgumentError("strategy produced no partitions");
    return r;
}

void TmiSeries::validate() const {
    if(!values.empty() && values.size() != grid.size())
        throw ArgumentError(fmt::format("series has {} values for {} grid points", values.size(), grid.size()));
    if(!extrema.empty() && extrema.size() != grid.size())
        throw ArgumentError(fmt::format("series has {} extrema for {} grid points", extrema.size(), grid.size()));
    for(const auto &e : extrema)
        if(e.min > e.max) throw ArgumentError("series has min > max");
}

std::optional<double> tau_sign_change(const TmiSeries &series, double threshold) {
    if(series.extrema.empty()) throw ArgumentError("tau needs a minimal-TMI track");
    if(!(threshold >= 0)) throw ArgumentError("threshold must be >= 0");
    series.validate();
    const auto &t = series.grid.times;
    for(std::size_t i = 0; i < t.size(); ++i) {
        const double v = series.extrema[i].min;
        if(v >= -threshold) continue;
        if(i == 0) return t[0];
        const double v0 = series.extrema[i - 1].min;
        return t[i - 1] + (t[i] - t[i - 1]) * (v0 + threshold) / (v0 - v);
    }
    return std::nullopt;
}

int min_distance(Mask x, Mask y) {
    if(!x || !y) throw ArgumentError("distance needs nonempty subsets");
    int best = kMaxSites + 1;
    for(Mask i = x; i; i &= i - 1)
        for(Mask j = y; j; j &= j - 1) best = std::min(best, std::abs(std::countr_zero(i) - std::countr_zero(j)));
    return best;
}

double lightcone_onset(const ModelSpec &spec, const PartitionTriple &p) {
    spec.validate();
    const int r = std::max({min_distance(p.a, p.b), min_distance(p.a, p.c), min_distance(p.b, p.c)});
    return r / (4.0 * spec.j0);
}

} // namespace spinchain
