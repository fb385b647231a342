#include "spinchain/entropy.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <fmt/format.h>

#include "spinchain/parallel.hpp"

namespace spinchain {

SiteSubset SiteSubset::of(std::initializer_list<int> sites) {
    SiteSubset s;
    for(int i : sites) {
        if(i < 0 || i >= kMaxSites) throw ArgumentError(fmt::format("site {} out of range", i));
        s.bits |= Mask{1} << i;
    }
    return s;
}

SiteSubset SiteSubset::range(int first, int last_exclusive) {
    if(first < 0 || last_exclusive > kMaxSites || first > last_exclusive) throw ArgumentError(fmt::format("bad site range [{}, {})", first, last_exclusive));
    return {full_mask(last_exclusive) & ~full_mask(first)};
}

namespace {

/// Compresses the bits of s selected by positions into the low bits.
inline Mask gather(Mask s, const int *positions, int count) noexcept {
    Mask out = 0;
    for(int j = 0; j < count; ++j) out |= ((s >> positions[j]) & 1u) << j;
    return out;
}

void check_subset(const StateVector &psi, SiteSubset a) {
    if(!psi.basis) throw ArgumentError("state has no basis");
    if(a.bits & ~full_mask(psi.basis->n_sites())) throw ArgumentError(fmt::format("subset {:#x} exceeds {} sites", a.bits, psi.basis->n_sites()));
}

} // namespace

SchmidtSpectrum subsystem_spectrum(const StateVector &psi, SiteSubset a) {
    check_subset(psi, a);
    const SectorBasis &basis = *psi.basis;
    const int          n     = basis.n_sites();
    const int          k     = basis.n_excitations();
    const int          na    = popcount(a.bits);
    const int          nb    = n - na;

    int pos_a[kMaxSites], pos_b[kMaxSites];
    {
        int ia = 0, ib = 0;
        for(int i = 0; i < n; ++i) ((a.bits >> i) & 1u ? pos_a[ia++] : pos_b[ib++]) = i;
    }

    // one block per excitation count inside A
    const int                     ka_lo = std::max(0, k - nb);
    const int                     ka_hi = std::min(k, na);
    std::vector<Eigen::MatrixXcd> blocks;
    blocks.reserve(static_cast<std::size_t>(ka_hi - ka_lo + 1));
    for(int ka = ka_lo; ka <= ka_hi; ++ka)
        blocks.emplace_back(Eigen::MatrixXcd::Zero(static_cast<Eigen::Index>(binomial(na, ka)), static_cast<Eigen::Index>(binomial(nb, k - ka))));

    for(std::size_t i = 0; i < basis.dim(); ++i) {
        const Mask s  = basis.state(i);
        const Mask sa = gather(s, pos_a, na);
        const Mask sb = gather(s, pos_b, nb);
        blocks[static_cast<std::size_t>(popcount(s & a.bits) - ka_lo)](static_cast<Eigen::Index>(colex_rank(sa)),
                                                                      static_cast<Eigen::Index>(colex_rank(sb))) =
            psi.amplitudes[static_cast<Eigen::Index>(i)];
    }

    SchmidtSpectrum spec;
    for(const auto &m : blocks) {
        if(m.rows() == 1 || m.cols() == 1) {
            spec.weights.push_back(m.squaredNorm());
            continue;
        }
        Eigen::MatrixXcd gram;
        if(m.rows() <= m.cols()) gram = m * m.adjoint();
        else gram = m.adjoint() * m;
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(gram, Eigen::EigenvaluesOnly);
        for(Eigen::Index i = 0; i < es.eigenvalues().size(); ++i) spec.weights.push_back(es.eigenvalues()[i]);
    }
    for(double &w : spec.weights) {
        if(w < -kWeightClip) throw NumericalError(fmt::format("reduced-state weight {} below -{}", w, kWeightClip));
        if(w < 0) w = 0;
    }
    std::sort(spec.weights.begin(), spec.weights.end(), std::greater<>());
    return spec;
}

double von_neumann(const SchmidtSpectrum &spectrum) {
    double s = 0;
    for(double w : spectrum.weights)
        if(w > 0) s -= w * std::log2(w);
    return s;
}

double entanglement_entropy(const StateVector &psi, SiteSubset a) { return von_neumann(subsystem_spectrum(psi, a)); }

SubsetEntropyTable::SubsetEntropyTable(int n_sites, std::vector<double> entries) : n_sites_(n_sites), full_(std::move(entries)) {
    if(n_sites < 1 || n_sites > kMaxSites || full_.size() != (std::size_t{1} << n_sites))
        throw ArgumentError(fmt::format("complete table for {} sites needs 2^{} entries, got {}", n_sites, n_sites, full_.size()));
}

SubsetEntropyTable::SubsetEntropyTable(int n_sites, std::vector<std::pair<Mask, double>> entries) : n_sites_(n_sites), partial_(std::move(entries)) {
    if(n_sites < 1 || n_sites > kMaxSites) throw ArgumentError(fmt::format("bad n_sites {}", n_sites));
    std::sort(partial_.begin(), partial_.end());
    partial_.erase(std::unique(partial_.begin(), partial_.end(), [](auto &x, auto &y) { return x.first == y.first; }), partial_.end());
}

double SubsetEntropyTable::lookup_partial(Mask m) const {
    const Mask all = full_mask(n_sites_);
    if(m == 0 || m == all) return 0.0;
    auto find = [&](Mask key) -> const std::pair<Mask, double> * {
        auto it = std::lower_bound(partial_.begin(), partial_.end(), std::pair<Mask, double>{key, -INFINITY});
        return (it != partial_.end() && it->first == key) ? &*it : nullptr;
    };
    if(auto *p = find(m)) return p->second;
    if(auto *p = find(~m & all)) return p->second;
    throw ArgumentError(fmt::format("subset {:#x} not present in partial entropy table", m));
}

SubsetEntropyTable subset_entropy_table(const StateVector &psi, int full_cap) {
    if(!psi.basis) throw ArgumentError("state has no basis");
    const int n = psi.basis->n_sites();
    if(n > full_cap) throw CapacityError(fmt::format("complete entropy table limited to N <= {}, got N = {}; pass an explicit subset list", full_cap, n));
    const Mask          all = full_mask(n);
    std::vector<double> s(std::size_t{1} << n, 0.0);
    // mask m owns slots m and ~m; the larger of the pair is never visited
    parallel_for(s.size(), [&](std::size_t lo, std::size_t hi) {
        for(std::size_t i = lo; i < hi; ++i) {
            const auto m    = static_cast<Mask>(i);
            const Mask comp = ~m & all;
            if(m > comp) continue;
            const int na = popcount(m);
            if(m == 0) continue;
            // evaluate the cheaper side of the cut
            const double e = entanglement_entropy(psi, SiteSubset{na <= n - na ? m : comp});
            s[m]           = e;
            s[comp]        = e;
        }
    });
    return SubsetEntropyTable(n, std::move(s));
}

SubsetEntropyTable subset_entropy_table(const StateVector &psi, std::span<const Mask> subsets) {
    if(!psi.basis) throw ArgumentError("state has no basis");
    const int         n = psi.basis->n_sites();
    std::vector<Mask> masks(subsets.begin(), subsets.end());
    std::sort(masks.begin(), masks.end());
    masks.erase(std::unique(masks.begin(), masks.end()), masks.end());
    std::vector<std::pair<Mask, double>> out(masks.size());
    parallel_for(masks.size(), [&](std::size_t lo, std::size_t hi) {
        for(std::size_t i = lo; i < hi; ++i) out[i] = {masks[i], entanglement_entropy(psi, SiteSubset{masks[i]})};
    });
    return SubsetEntropyTable(n, std::move(out));
}

namespace {
void check_disjoint(const SubsetEntropyTable &t, std::initializer_list<SiteSubset> parts) {
    Mask seen = 0;
    for(auto p : parts) {
        if(p.empty()) throw ArgumentError("subsystems must be nonempty");
        if(p.bits & ~full_mask(t.n_sites())) throw ArgumentError(fmt::format("subset {:#x} exceeds {} sites", p.bits, t.n_sites()));
        if(p.bits & seen) throw ArgumentError(fmt::format("subsystems overlap on {:#x}", p.bits & seen));
        seen |= p.bits;
    }
}
} // namespace

double mutual_information(const SubsetEntropyTable &table, SiteSubset a, SiteSubset b) {
    check_disjoint(table, {a, b});
    return table(a) + table(b) - table(a | b);
}

double tmi(const SubsetEntropyTable &table, SiteSubset a, SiteSubset b, SiteSubset c) {
    check_disjoint(table, {a, b, c});
    return table(a) + table(b) + table(c) - table(a | b) - table(a | c) - table(b | c) + table(a | b | c);
}

double monogamy_gap(const SubsetEntropyTable &table, SiteSubset a, SiteSubset b, SiteSubset c) {
    check_disjoint(table, {a, b, c});
    return mutual_information(table, a, b | c) - mutual_information(table, a, b) - mutual_information(table, a, c);
}

} // namespace spinchain
