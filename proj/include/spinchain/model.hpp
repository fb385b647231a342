#pragma once

#include <Eigen/Core>
#include <memory>
#include <optional>
#include <span>
#include <vector>

#include "spinchain/common.hpp"

namespace spinchain {

enum class Boundary { Open };

/// Long-range XY chain H = sum_{m<n} J_mn (X_m X_n + Y_m Y_n) with
/// J_mn = j0 / |m-n|^alpha, or strictly nearest-neighbour couplings when
/// nn_limit is set. Construct through power_law() / nearest_neighbour()
/// so the invariants are checked.
struct ModelSpec {
    int                   n_sites  = 0;
    double                j0       = 1.0;
    std::optional<double> alpha    = {};
    bool                  nn_limit = false;
    Boundary              boundary = Boundary::Open;

    [[nodiscard]] static ModelSpec power_law(int n_sites, double j0, double alpha);
    [[nodiscard]] static ModelSpec nearest_neighbour(int n_sites, double j0);

    /// Throws ArgumentError when a field combination is invalid.
    void validate() const;

    /// "0.5" or "nn"; used in output metadata.
    [[nodiscard]] std::string alpha_label() const;

    bool operator==(const ModelSpec &) const = default;
};

struct CouplingMatrix {
    ModelSpec           spec;
    std::vector<double> entries; // row-major N x N, symmetric, zero diagonal
    double              kac = 0; // sum_{m<n} J_mn / N

    [[nodiscard]] int    n_sites() const noexcept { return spec.n_sites; }
    [[nodiscard]] double operator()(int m, int n) const noexcept {
        return entries[static_cast<std::size_t>(m) * static_cast<std::size_t>(spec.n_sites) + static_cast<std::size_t>(n)];
    }
};

[[nodiscard]] CouplingMatrix coupling_matrix(const ModelSpec &spec);

[[nodiscard]] std::uint64_t sector_dimension(int n_sites, int k);

/// Colexicographic rank of a fixed-popcount mask; for masks of equal
/// popcount this is the position in increasing numeric order.
[[nodiscard]] std::uint64_t colex_rank(Mask m) noexcept;

/// Computational basis states with exactly k excitations (set bits),
/// sorted increasingly as integers.
class SectorBasis {
  public:
    SectorBasis(int n_sites, int n_excitations);

    [[nodiscard]] int                   n_sites() const noexcept { return n_sites_; }
    [[nodiscard]] int                   n_excitations() const noexcept { return k_; }
    [[nodiscard]] std::size_t           dim() const noexcept { return states_.size(); }
    [[nodiscard]] std::span<const Mask> states() const noexcept { return states_; }
    [[nodiscard]] Mask                  state(std::size_t i) const noexcept { return states_[i]; }

    [[nodiscard]] bool contains(Mask m) const noexcept {
        return (m & ~full_mask(n_sites_)) == 0 && popcount(m) == k_;
    }

    /// Index of a member state. Uses a split lookup table (low half /
    /// high half of the mask) so ranking is two loads and an add.
    [[nodiscard]] std::size_t rank(Mask m) const noexcept {
        const Mask lo = m & low_mask_;
        const Mask hi = m >> low_bits_;
        return low_rank_[lo] + high_rank_[static_cast<std::size_t>(popcount(lo)) * high_stride_ + hi];
    }

    bool operator==(const SectorBasis &o) const noexcept { return n_sites_ == o.n_sites_ && k_ == o.k_; }

  private:
    int                      n_sites_;
    int                      k_;
    std::vector<Mask>        states_;
    int                      low_bits_;
    Mask                     low_mask_;
    std::size_t              high_stride_;
    std::vector<std::size_t> low_rank_;
    std::vector<std::size_t> high_rank_;
};

[[nodiscard]] std::shared_ptr<const SectorBasis> enumerate_sector(int n_sites, int k);

/// Amplitudes over a sector basis.
struct StateVector {
    std::shared_ptr<const SectorBasis> basis;
    Eigen::VectorXcd                   amplitudes;

    [[nodiscard]] std::size_t dim() const noexcept { return static_cast<std::size_t>(amplitudes.size()); }
    [[nodiscard]] double      norm() const { return amplitudes.norm(); }
};

[[nodiscard]] StateVector neel_state(std::shared_ptr<const SectorBasis> basis);
[[nodiscard]] StateVector single_excitation_state(std::shared_ptr<const SectorBasis> basis, int site);

/// Neel bitmask for N sites: |0101...>, site 0 empty, site 1 excited, ...
[[nodiscard]] Mask neel_mask(int n_sites) noexcept;

/// Sector-restricted Hamiltonian applied matrix-free. When the sector
/// dimension is at most cache_threshold a CSR copy is built once and used
/// for every product.
class SectorHamiltonian {
  public:
    static constexpr std::size_t kDefaultCacheThreshold = 200000;

    SectorHamiltonian(CouplingMatrix coupling, std::shared_ptr<const SectorBasis> basis,
                      std::size_t cache_threshold = kDefaultCacheThreshold);

    [[nodiscard]] const CouplingMatrix                    &coupling() const noexcept { return coupling_; }
    [[nodiscard]] const std::shared_ptr<const SectorBasis> &basis() const noexcept { return basis_; }
    [[nodiscard]] std::size_t                              dim() const noexcept { return basis_->dim(); }
    [[nodiscard]] bool                                     cached() const noexcept { return !row_ptr_.empty(); }

    /// out = H in. out is resized; in and out must not alias.
    void apply(const Eigen::VectorXcd &in, Eigen::VectorXcd &out) const;

    /// Real symmetric dense matrix of the sector block.
    [[nodiscard]] Eigen::MatrixXd dense() const;

    /// <psi|H|psi> (real).
    [[nodiscard]] double energy(const Eigen::VectorXcd &psi) const;

  private:
    void apply_rows(const Eigen::VectorXcd &in, Eigen::VectorXcd &out, std::size_t lo, std::size_t hi) const;

    CouplingMatrix                     coupling_;
    std::shared_ptr<const SectorBasis> basis_;
    std::vector<double>                hop_; // 2 J_mn
    std::vector<std::size_t>           row_ptr_;
    std::vector<std::uint32_t>         cols_;
    std::vector<double>                vals_;
};

[[nodiscard]] StateVector apply_hamiltonian(const CouplingMatrix &coupling, const SectorBasis &basis, const StateVector &psi);

} // namespace spinchain
