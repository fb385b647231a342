#pragma once

#include <span>
#include <utility>
#include <vector>

#include "spinchain/model.hpp"

namespace spinchain {

/// Set of sites, bit i = site i.
struct SiteSubset {
    Mask bits = 0;

    [[nodiscard]] static SiteSubset of(std::initializer_list<int> sites);
    [[nodiscard]] static SiteSubset range(int first, int last_exclusive);

    [[nodiscard]] int  size() const noexcept { return popcount(bits); }
    [[nodiscard]] bool empty() const noexcept { return bits == 0; }
    [[nodiscard]] bool overlaps(SiteSubset o) const noexcept { return (bits & o.bits) != 0; }
    [[nodiscard]] bool contains(int site) const noexcept { return (bits >> site) & 1u; }

    friend SiteSubset operator|(SiteSubset a, SiteSubset b) noexcept { return {a.bits | b.bits}; }
    bool              operator==(const SiteSubset &) const = default;
    auto              operator<=>(const SiteSubset &) const = default;
};

/// Eigenvalues of a reduced density matrix, descending.
struct SchmidtSpectrum {
    std::vector<double> weights;
};

/// Weights in [-1e-12, 0) are clipped to zero; anything more negative
/// raises NumericalError.
inline constexpr double kWeightClip = 1e-12;

/// Reduced-state spectrum for subsystem A of a sector state. The amplitude
/// matrix is block diagonal in the number of excitations inside A, so each
/// block is decomposed separately.
[[nodiscard]] SchmidtSpectrum subsystem_spectrum(const StateVector &psi, SiteSubset a);

/// -sum lambda log2 lambda, in bits.
[[nodiscard]] double von_neumann(const SchmidtSpectrum &spectrum);

/// Convenience: von_neumann(subsystem_spectrum(psi, a)).
[[nodiscard]] double entanglement_entropy(const StateVector &psi, SiteSubset a);

/// Von Neumann entropy (bits) indexed by subset mask. Either complete
/// (2^N entries) or restricted to an explicit list of masks; lookups of a
/// missing mask fall back to its complement, then throw ArgumentError.
class SubsetEntropyTable {
  public:
    static constexpr int kDefaultFullCap = 16;

    SubsetEntropyTable() = default;
    /// Complete table from raw entries (size must be 2^n_sites).
    SubsetEntropyTable(int n_sites, std::vector<double> entries);
    /// Partial table from (mask, entropy) pairs.
    SubsetEntropyTable(int n_sites, std::vector<std::pair<Mask, double>> entries);

    [[nodiscard]] int  n_sites() const noexcept { return n_sites_; }
    [[nodiscard]] bool complete() const noexcept { return !full_.empty(); }

    [[nodiscard]] double operator()(Mask m) const {
        if(complete()) return full_[m];
        return lookup_partial(m);
    }
    [[nodiscard]] double operator()(SiteSubset a) const { return (*this)(a.bits); }

    /// Complete-table storage; empty for partial tables.
    [[nodiscard]] std::span<const double> entries() const noexcept { return full_; }
    /// Partial-table storage sorted by mask; empty for complete tables.
    [[nodiscard]] std::span<const std::pair<Mask, double>> partial_entries() const noexcept { return partial_; }

  private:
    [[nodiscard]] double lookup_partial(Mask m) const;

    int                                  n_sites_ = 0;
    std::vector<double>                  full_;
    std::vector<std::pair<Mask, double>> partial_;
};

/// All 2^N subset entropies. Only subsets no larger than their complement
/// are decomposed; the rest are mirrored. Throws CapacityError if
/// N > full_cap.
[[nodiscard]] SubsetEntropyTable subset_entropy_table(const StateVector &psi, int full_cap = SubsetEntropyTable::kDefaultFullCap);

/// Entropies of the listed subsets only (any N).
[[nodiscard]] SubsetEntropyTable subset_entropy_table(const StateVector &psi, std::span<const Mask> subsets);

/// I(A:B) = S_A + S_B - S_AB. Throws ArgumentError on overlap or empty input.
[[nodiscard]] double mutual_information(const SubsetEntropyTable &table, SiteSubset a, SiteSubset b);

/// I(A:B:C) = S_A + S_B + S_C - S_AB - S_AC - S_BC + S_ABC.
[[nodiscard]] double tmi(const SubsetEntropyTable &table, SiteSubset a, SiteSubset b, SiteSubset c);

/// I(A:BC) - I(A:B) - I(A:C) = -tmi; nonnegative when the triple is monogamous.
[[nodiscard]] double monogamy_gap(const SubsetEntropyTable &table, SiteSubset a, SiteSubset b, SiteSubset c);

/// Unchecked TMI for hot loops over a complete table.
[[nodiscard]] inline double tmi_lookup(std::span<const double> s, Mask a, Mask b, Mask c) noexcept {
    return s[a] + s[b] + s[c] - s[a | b] - s[a | c] - s[b | c] + s[a | b | c];
}

} // namespace spinchain
