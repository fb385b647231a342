#include "spinchain/onebody.hpp"

#include <cmath>
#include <fmt/format.h>

#include "spinchain/parallel.hpp"

namespace spinchain {

namespace {

double snap(double p) {
    if(p < -kProbabilitySnap || p > 1.0 + kProbabilitySnap || std::isnan(p)) throw ArgumentError(fmt::format("probability {} outside [0, 1]", p));
    if(p < kProbabilitySnap) return 0.0;
    if(p > 1.0 - kProbabilitySnap) return 1.0;
    return p;
}

} // namespace

double binary_entropy(double p) {
    p = snap(p);
    if(p == 0.0 || p == 1.0) return 0.0;
    return -p * std::log2(p) - (1.0 - p) * std::log2(1.0 - p);
}

OccupationWeights occupation_weights(std::span<const cplx> c, SiteSubset a, SiteSubset b, SiteSubset c_set) {
    double norm2 = 0;
    for(const auto &x : c) norm2 += std::norm(x);
    if(std::abs(std::sqrt(norm2) - 1.0) > 1e-10) throw ArgumentError(fmt::format("coefficients not normalized (norm {})", std::sqrt(norm2)));
    if(a.overlaps(b) || a.overlaps(c_set) || b.overlaps(c_set)) throw ArgumentError("subsets must be pairwise disjoint");
    const Mask all = full_mask(static_cast<int>(c.size()));
    if((a | b | c_set).bits & ~all) throw ArgumentError("subset exceeds the number of sites");
    auto weight = [&](SiteSubset s) {
        double p = 0;
        for(Mask m = s.bits; m; m &= m - 1) p += std::norm(c[static_cast<std::size_t>(std::countr_zero(m))]);
        return p;
    };
    return {weight(a), weight(b), weight(c_set)};
}

double tmi_binary(const OccupationWeights &w) {
    const double pa = snap(w.p_a), pb = snap(w.p_b), pc = snap(w.p_c);
    const double sum = snap(pa + pb + pc);
    if(pa == 0.0 || pb == 0.0 || pc == 0.0 || sum == 1.0) return 0.0;
    return binary_entropy(pa) + binary_entropy(pb) + binary_entropy(pc) + binary_entropy(sum) - binary_entropy(pa + pb) - binary_entropy(pa + pc) -
           binary_entropy(pb + pc);
}

OnebodyScan onebody_tmi_scan(const CouplingMatrix &coupling, int site, const TimeGrid &grid, std::span<const PartitionTriple> partitions) {
    grid.validate();
    const int n = coupling.n_sites();
    if(site < 0 || site >= n) throw ArgumentError(fmt::format("site {} out of range [0, {})", site, n));
    if(partitions.empty()) throw ArgumentError("onebody scan needs at least one partition");
    if(n > 24) throw CapacityError(fmt::format("onebody scan builds 2^N tables; N = {} too large", n));
    const Mask all = full_mask(n);
    for(const auto &p : partitions)
        if(p.abc() & ~all) throw ArgumentError("partition exceeds the number of sites");

    OnebodyScan out;
    out.series.grid          = grid;
    out.series.meta.alpha    = coupling.spec.alpha;
    out.series.meta.nn_limit = coupling.spec.nn_limit;
    out.series.meta.n_sites  = n;
    out.global_min           = INFINITY;

    std::vector<double> prob(std::size_t{1} << n), hbin(std::size_t{1} << n);
    for(std::size_t ti = 0; ti < grid.size(); ++ti) {
        const Eigen::VectorXcd c = onebody_propagator(coupling, grid.physical(ti, coupling.kac)).col(site);
        std::vector<double>    occ(static_cast<std::size_t>(n));
        for(int m = 0; m < n; ++m) occ[static_cast<std::size_t>(m)] = std::norm(c[m]);
        prob[0] = 0;
        for(Mask m = 1; m <= all; ++m) prob[m] = prob[m & (m - 1)] + occ[static_cast<std::size_t>(std::countr_zero(m))];
        for(Mask m = 0; m <= all; ++m) {
            prob[m] = snap(prob[m]);
            hbin[m] = binary_entropy(prob[m]);
        }
        out.occupations.push_back(std::move(occ));

        const std::size_t blocks = std::min<std::size_t>(64, partitions.size());
        std::vector<TmiExtrema> part(blocks);
        parallel_blocks(partitions.size(), blocks, [&](std::size_t blk, std::size_t lo, std::size_t hi) {
            TmiExtrema r{INFINITY, partitions[lo], -INFINITY, partitions[lo]};
            for(std::size_t i = lo; i < hi; ++i) {
                const auto &p = partitions[i];
                double      v = 0;
                if(prob[p.a] != 0.0 && prob[p.b] != 0.0 && prob[p.c] != 0.0 && prob[p.abc()] != 1.0)
                    v = hbin[p.a] + hbin[p.b] + hbin[p.c] + hbin[p.abc()] - hbin[p.a | p.b] - hbin[p.a | p.c] - hbin[p.b | p.c];
                if(v < r.min) r.min = v, r.argmin = p;
                if(v > r.max) r.max = v, r.argmax = p;
            }
            part[blk] = r;
        });
        TmiExtrema best = part[0];
        for(std::size_t b = 1; b < blocks; ++b) {
            if(part[b].min < best.min) best.min = part[b].min, best.argmin = part[b].argmin;
            if(part[b].max > best.max) best.max = part[b].max, best.argmax = part[b].argmax;
        }
        if(best.min < out.global_min) {
            out.global_min     = best.min;
            out.min_time_index = ti;
            out.min_partition  = best.argmin;
        }
        out.series.extrema.push_back(best);
    }
    return out;
}

} // namespace spinchain
