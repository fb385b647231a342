#include "spinchain/model.hpp"

#include <array>
#include <cmath>
#include <limits>
#include <fmt/format.h>

#include "spinchain/parallel.hpp"

namespace spinchain {

namespace {
constexpr auto kBinom = [] {
    std::array<std::array<std::uint64_t, 33>, 33> t{};
    for(std::size_t n = 0; n < 33; ++n) {
        t[n][0] = 1;
        for(std::size_t k = 1; k <= n; ++k) t[n][k] = t[n - 1][k - 1] + (k < n ? t[n - 1][k] : 0);
    }
    return t;
}();
} // namespace

std::uint64_t binomial(int n, int k) {
    if(k < 0 || n < 0 || k > n) return 0;
    k = std::min(k, n - k);
    unsigned __int128 r = 1;
    for(int i = 1; i <= k; ++i) {
        r = r * static_cast<unsigned>(n - k + i) / static_cast<unsigned>(i);
        if(r > std::numeric_limits<std::uint64_t>::max()) throw CapacityError(fmt::format("binomial({}, {}) overflows", n, k));
    }
    return static_cast<std::uint64_t>(r);
}

ModelSpec ModelSpec::power_law(int n_sites, double j0, double alpha) {
    ModelSpec s{.n_sites = n_sites, .j0 = j0, .alpha = alpha, .nn_limit = false};
    s.validate();
    return s;
}

ModelSpec ModelSpec::nearest_neighbour(int n_sites, double j0) {
    ModelSpec s{.n_sites = n_sites, .j0 = j0, .alpha = std::nullopt, .nn_limit = true};
    s.validate();
    return s;
}

void ModelSpec::validate() const {
    // N=2 and N=3 are accepted for unit-level checks; anything that needs
    // three disjoint subsystems enforces N >= 4 itself.
    if(n_sites < 2 || n_sites > kMaxSites) throw ArgumentError(fmt::format("n_sites must be in [2, {}], got {}", kMaxSites, n_sites));
    if(!(j0 > 0) || !std::isfinite(j0)) throw ArgumentError(fmt::format("j0 must be finite and > 0, got {}", j0));
    if(nn_limit && alpha) throw ArgumentError("nn_limit and a finite alpha are mutually exclusive");
    if(!nn_limit) {
        if(!alpha) throw ArgumentError("alpha is required unless nn_limit is set");
        if(!std::isfinite(*alpha) || *alpha < 0) throw ArgumentError(fmt::format("alpha must be finite and >= 0, got {}", *alpha));
    }
}

std::string ModelSpec::alpha_label() const { return nn_limit ? std::string("nn") : fmt::format("{}", alpha.value_or(0.0)); }

CouplingMatrix coupling_matrix(const ModelSpec &spec) {
    spec.validate();
    const auto     n = static_cast<std::size_t>(spec.n_sites);
    CouplingMatrix c{.spec = spec, .entries = std::vector<double>(n * n, 0.0), .kac = 0};
    double         total = 0;
    for(std::size_t m = 0; m < n; ++m) {
        for(std::size_t k = m + 1; k < n; ++k) {
            const auto dist = static_cast<double>(k - m);
            double     j    = 0;
            if(spec.nn_limit) j = (k - m == 1) ? spec.j0 : 0.0;
            else j = spec.j0 / std::pow(dist, *spec.alpha);
            c.entries[m * n + k] = j;
            c.entries[k * n + m] = j;
            total += j;
        }
    }
    c.kac = total / static_cast<double>(n);
    return c;
}

std::uint64_t sector_dimension(int n_sites, int k) {
    if(n_sites < 0 || k < 0 || k > n_sites) throw ArgumentError(fmt::format("sector ({}, {}) out of range", n_sites, k));
    return binomial(n_sites, k);
}

std::uint64_t colex_rank(Mask m) noexcept {
    std::uint64_t r = 0;
    int           j = 1;
    while(m) {
        const int pos = std::countr_zero(m);
        r += kBinom[static_cast<std::size_t>(pos)][static_cast<std::size_t>(j++)];
        m &= m - 1;
    }
    return r;
}

SectorBasis::SectorBasis(int n_sites, int n_excitations) : n_sites_(n_sites), k_(n_excitations) {
    if(n_sites < 1 || n_sites > kMaxSites) throw ArgumentError(fmt::format("n_sites must be in [1, {}], got {}", kMaxSites, n_sites));
    const auto dim = sector_dimension(n_sites, n_excitations);
    if(dim > (std::uint64_t{1} << 31)) throw CapacityError(fmt::format("sector ({}, {}) has dimension {} beyond the index range", n_sites, n_excitations, dim));

    states_.reserve(dim);
    if(k_ == 0) {
        states_.push_back(0);
    } else {
        // Gosper's hack: next larger integer with the same popcount
        std::uint64_t       v   = (std::uint64_t{1} << k_) - 1;
        const std::uint64_t end = std::uint64_t{1} << n_sites_;
        while(v < end) {
            states_.push_back(static_cast<Mask>(v));
            const std::uint64_t t = v | (v - 1);
            v                     = (t + 1) | (((~t & -~t) - 1) >> (std::countr_zero(v) + 1));
        }
    }

    low_bits_       = n_sites_ / 2;
    low_mask_       = full_mask(low_bits_);
    const int hbits = n_sites_ - low_bits_;
    high_stride_    = std::size_t{1} << hbits;
    low_rank_.resize(std::size_t{1} << low_bits_);
    for(Mask lo = 0; lo < low_rank_.size(); ++lo) low_rank_[lo] = colex_rank(lo);
    high_rank_.assign(static_cast<std::size_t>(low_bits_ + 1) * high_stride_, 0);
    for(int c = 0; c <= low_bits_; ++c) {
        for(Mask hi = 0; hi < high_stride_; ++hi) {
            std::uint64_t r = 0;
            int           j = c + 1;
            for(Mask h = hi; h; h &= h - 1) r += binomial(low_bits_ + std::countr_zero(h), j++);
            high_rank_[static_cast<std::size_t>(c) * high_stride_ + hi] = r;
        }
    }
}

std::shared_ptr<const SectorBasis> enumerate_sector(int n_sites, int k) { return std::make_shared<const SectorBasis>(n_sites, k); }

Mask neel_mask(int n_sites) noexcept {
    Mask m = 0;
    for(int i = 1; i < n_sites; i += 2) m |= Mask{1} << i;
    return m;
}

StateVector neel_state(std::shared_ptr<const SectorBasis> basis) {
    if(!basis) throw ArgumentError("null basis");
    const Mask neel = neel_mask(basis->n_sites());
    if(!basis->contains(neel))
        throw ArgumentError(fmt::format("Neel state needs k = {} excitations, basis has k = {}", basis->n_sites() / 2, basis->n_excitations()));
    StateVector psi{std::move(basis), {}};
    psi.amplitudes = Eigen::VectorXcd::Zero(static_cast<Eigen::Index>(psi.basis->dim()));
    psi.amplitudes[static_cast<Eigen::Index>(psi.basis->rank(neel))] = 1.0;
    return psi;
}

StateVector single_excitation_state(std::shared_ptr<const SectorBasis> basis, int site) {
    if(!basis) throw ArgumentError("null basis");
    if(basis->n_excitations() != 1) throw ArgumentError(fmt::format("single excitation needs k = 1, basis has k = {}", basis->n_excitations()));
    if(site < 0 || site >= basis->n_sites()) throw ArgumentError(fmt::format("site {} out of range [0, {})", site, basis->n_sites()));
    StateVector psi{std::move(basis), {}};
    psi.amplitudes = Eigen::VectorXcd::Zero(static_cast<Eigen::Index>(psi.basis->dim()));
    psi.amplitudes[static_cast<Eigen::Index>(psi.basis->rank(Mask{1} << site))] = 1.0;
    return psi;
}

SectorHamiltonian::SectorHamiltonian(CouplingMatrix coupling, std::shared_ptr<const SectorBasis> basis, std::size_t cache_threshold)
    : coupling_(std::move(coupling)), basis_(std::move(basis)) {
    if(!basis_) throw ArgumentError("null basis");
    if(coupling_.n_sites() != basis_->n_sites())
        throw ArgumentError(fmt::format("coupling has {} sites, basis has {}", coupling_.n_sites(), basis_->n_sites()));
    hop_.resize(coupling_.entries.size());
    for(std::size_t i = 0; i < hop_.size(); ++i) hop_[i] = 2.0 * coupling_.entries[i];

    if(basis_->dim() > cache_threshold) return;
    const auto n   = static_cast<std::size_t>(basis_->n_sites());
    const Mask all = full_mask(basis_->n_sites());
    row_ptr_.reserve(basis_->dim() + 1);
    row_ptr_.push_back(0);
    for(std::size_t i = 0; i < basis_->dim(); ++i) {
        const Mask s = basis_->state(i);
        for(Mask occ = s; occ; occ &= occ - 1) {
            const auto m = static_cast<std::size_t>(std::countr_zero(occ));
            for(Mask emp = ~s & all; emp; emp &= emp - 1) {
                const auto   k = static_cast<std::size_t>(std::countr_zero(emp));
                const double h = hop_[m * n + k];
                if(h == 0.0) continue;
                cols_.push_back(static_cast<std::uint32_t>(basis_->rank(s ^ (Mask{1} << m) ^ (Mask{1} << k))));
                vals_.push_back(h);
            }
        }
        row_ptr_.push_back(cols_.size());
    }
}

void SectorHamiltonian::apply_rows(const Eigen::VectorXcd &in, Eigen::VectorXcd &out, std::size_t lo, std::size_t hi) const {
    if(cached()) {
        for(std::size_t i = lo; i < hi; ++i) {
            cplx acc = 0;
            for(std::size_t p = row_ptr_[i]; p < row_ptr_[i + 1]; ++p) acc += vals_[p] * in[cols_[p]];
            out[static_cast<Eigen::Index>(i)] = acc;
        }
        return;
    }
    const auto n   = static_cast<std::size_t>(basis_->n_sites());
    const Mask all = full_mask(basis_->n_sites());
    for(std::size_t i = lo; i < hi; ++i) {
        const Mask s   = basis_->state(i);
        cplx       acc = 0;
        for(Mask occ = s; occ; occ &= occ - 1) {
            const auto m = static_cast<std::size_t>(std::countr_zero(occ));
            for(Mask emp = ~s & all; emp; emp &= emp - 1) {
                const auto   k = static_cast<std::size_t>(std::countr_zero(emp));
                const double h = hop_[m * n + k];
                if(h == 0.0) continue;
                acc += h * in[static_cast<Eigen::Index>(basis_->rank(s ^ (Mask{1} << m) ^ (Mask{1} << k)))];
            }
        }
        out[static_cast<Eigen::Index>(i)] = acc;
    }
}

void SectorHamiltonian::apply(const Eigen::VectorXcd &in, Eigen::VectorXcd &out) const {
    if(static_cast<std::size_t>(in.size()) != dim()) throw ArgumentError(fmt::format("vector length {} does not match sector dimension {}", in.size(), dim()));
    out.resize(in.size());
    // each output row is owned by exactly one block
    if(dim() < 4096) apply_rows(in, out, 0, dim());
    else parallel_for(dim(), [&](std::size_t lo, std::size_t hi) { apply_rows(in, out, lo, hi); });
}

Eigen::MatrixXd SectorHamiltonian::dense() const {
    const auto      d = static_cast<Eigen::Index>(dim());
    Eigen::MatrixXd h = Eigen::MatrixXd::Zero(d, d);
    Eigen::VectorXcd e = Eigen::VectorXcd::Zero(d), col(d);
    for(Eigen::Index j = 0; j < d; ++j) {
        e[j] = 1.0;
        apply(e, col);
        h.col(j) = col.real();
        e[j]     = 0.0;
    }
    return h;
}

double SectorHamiltonian::energy(const Eigen::VectorXcd &psi) const {
    Eigen::VectorXcd hpsi;
    apply(psi, hpsi);
    return psi.dot(hpsi).real();
}

StateVector apply_hamiltonian(const CouplingMatrix &coupling, const SectorBasis &basis, const StateVector &psi) {
    if(!psi.basis || !(*psi.basis == basis)) throw ArgumentError("state does not live on the given basis");
    if(coupling.n_sites() != basis.n_sites()) throw ArgumentError("coupling and basis disagree on n_sites");
    SectorHamiltonian h(coupling, psi.basis, 0);
    StateVector       out{psi.basis, {}};
    h.apply(psi.amplitudes, out.amplitudes);
    return out;
}

} // namespace spinchain
