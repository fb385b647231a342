#include "oracle.hpp"

#include <Eigen/Eigenvalues>
#include <array>
#include <cmath>
#include <random>

namespace spinchain::oracle {

namespace {

using Pauli = std::array<std::array<cplx, 2>, 2>;

// Standard Pauli matrices in the (Z = +1, Z = -1) ordering. With
// Z|1> = +|1>, local index 0 is |1> and index 1 is |0>.
constexpr Pauli kX{{{cplx{0, 0}, cplx{1, 0}}, {cplx{1, 0}, cplx{0, 0}}}};
constexpr Pauli kY{{{cplx{0, 0}, cplx{0, -1}}, {cplx{0, 1}, cplx{0, 0}}}};

inline int local_index(std::size_t state, int site) { return ((state >> site) & 1u) ? 0 : 1; }
inline std::size_t with_local(std::size_t state, int site, int idx) {
    const std::size_t bit = std::size_t{1} << site;
    return idx == 0 ? (state | bit) : (state & ~bit);
}

/// out += coeff * (P_m P_n) in, applied column by column.
void add_two_site(const Pauli &p, int m, int n, double coeff, const Eigen::VectorXcd &in, Eigen::VectorXcd &out) {
    for(Eigen::Index s = 0; s < in.size(); ++s) {
        if(in[s] == cplx{}) continue;
        const auto st = static_cast<std::size_t>(s);
        const int  im = local_index(st, m), in_ = local_index(st, n);
        for(int om = 0; om < 2; ++om)
            for(int on = 0; on < 2; ++on) {
                const cplx f = p[static_cast<std::size_t>(om)][static_cast<std::size_t>(im)] * p[static_cast<std::size_t>(on)][static_cast<std::size_t>(in_)];
                if(f == cplx{}) continue;
                out[static_cast<Eigen::Index>(with_local(with_local(st, m, om), n, on))] += coeff * f * in[s];
            }
    }
}

} // namespace

Eigen::MatrixXcd full_hamiltonian(const CouplingMatrix &coupling) {
    const int n = coupling.n_sites();
    if(n > kMaxOracleSites) throw CapacityError("oracle Hamiltonian limited to small N");
    const Eigen::Index dim = Eigen::Index{1} << n;
    Eigen::MatrixXcd   h   = Eigen::MatrixXcd::Zero(dim, dim);
    Eigen::VectorXcd   e   = Eigen::VectorXcd::Zero(dim);
    for(Eigen::Index col = 0; col < dim; ++col) {
        e.setZero();
        e[col]               = 1.0;
        Eigen::VectorXcd out = Eigen::VectorXcd::Zero(dim);
        for(int m = 0; m < n; ++m)
            for(int k = m + 1; k < n; ++k) {
                const double j = coupling(m, k);
                if(j == 0.0) continue;
                add_two_site(kX, m, k, j, e, out);
                add_two_site(kY, m, k, j, e, out);
            }
        h.col(col) = out;
    }
    return h;
}

Eigen::VectorXd total_z(int n_sites) {
    Eigen::VectorXd z(Eigen::Index{1} << n_sites);
    for(Eigen::Index s = 0; s < z.size(); ++s) {
        double v = 0;
        for(int i = 0; i < n_sites; ++i) v += ((s >> i) & 1) ? 1.0 : -1.0;
        z[s] = v;
    }
    return z;
}

Eigen::VectorXcd embed(const StateVector &psi) {
    const int        n    = psi.basis->n_sites();
    Eigen::VectorXcd full = Eigen::VectorXcd::Zero(Eigen::Index{1} << n);
    for(std::size_t i = 0; i < psi.basis->dim(); ++i) full[psi.basis->state(i)] = psi.amplitudes[static_cast<Eigen::Index>(i)];
    return full;
}

Eigen::VectorXcd restrict_to(const Eigen::VectorXcd &full, const SectorBasis &basis) {
    Eigen::VectorXcd out(static_cast<Eigen::Index>(basis.dim()));
    for(std::size_t i = 0; i < basis.dim(); ++i) out[static_cast<Eigen::Index>(i)] = full[basis.state(i)];
    return out;
}

FullEvolver::FullEvolver(const Eigen::MatrixXcd &h) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(h);
    energies_ = es.eigenvalues();
    vectors_  = es.eigenvectors();
}

Eigen::VectorXcd FullEvolver::evolve(const Eigen::VectorXcd &psi, double t) const {
    Eigen::VectorXcd c = vectors_.adjoint() * psi;
    for(Eigen::Index i = 0; i < c.size(); ++i) c[i] *= std::exp(cplx(0, -energies_[i] * t));
    return vectors_ * c;
}

Eigen::MatrixXcd partial_trace(const Eigen::VectorXcd &full, int n_sites, Mask a) {
    std::vector<int> in_a, out_a;
    for(int i = 0; i < n_sites; ++i) ((a >> i) & 1u ? in_a : out_a).push_back(i);
    const Eigen::Index da = Eigen::Index{1} << in_a.size();
    const Eigen::Index de = Eigen::Index{1} << out_a.size();
    auto compose = [&](Eigen::Index ia, Eigen::Index ie) {
        std::size_t s = 0;
        for(std::size_t j = 0; j < in_a.size(); ++j) s |= static_cast<std::size_t>((ia >> j) & 1) << in_a[j];
        for(std::size_t j = 0; j < out_a.size(); ++j) s |= static_cast<std::size_t>((ie >> j) & 1) << out_a[j];
        return static_cast<Eigen::Index>(s);
    };
    Eigen::MatrixXcd psi(da, de);
    for(Eigen::Index i = 0; i < da; ++i)
        for(Eigen::Index e = 0; e < de; ++e) psi(i, e) = full[compose(i, e)];
    Eigen::MatrixXcd rho = Eigen::MatrixXcd::Zero(da, da);
    for(Eigen::Index i = 0; i < da; ++i)
        for(Eigen::Index j = 0; j < da; ++j) {
            cplx acc = 0;
            for(Eigen::Index e = 0; e < de; ++e) acc += psi(i, e) * std::conj(psi(j, e));
            rho(i, j) = acc;
        }
    return rho;
}

double entropy(const Eigen::VectorXcd &full, int n_sites, Mask a) {
    const Eigen::MatrixXcd                          rho = partial_trace(full, n_sites, a);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(rho, Eigen::EigenvaluesOnly);
    double                                          s = 0;
    for(Eigen::Index i = 0; i < es.eigenvalues().size(); ++i) {
        const double l = es.eigenvalues()[i];
        if(l > 0) s -= l * std::log2(l);
    }
    return s;
}

StateVector random_state(std::shared_ptr<const SectorBasis> basis, std::uint64_t seed) {
    std::mt19937_64                  rng(seed);
    std::normal_distribution<double> g;
    StateVector                      psi{basis, Eigen::VectorXcd(static_cast<Eigen::Index>(basis->dim()))};
    for(Eigen::Index i = 0; i < psi.amplitudes.size(); ++i) psi.amplitudes[i] = cplx(g(rng), g(rng));
    psi.amplitudes.normalize();
    return psi;
}

} // namespace spinchain::oracle
