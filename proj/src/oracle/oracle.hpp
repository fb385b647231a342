#pragma once

// Brute-force reference implementations in the full 2^N Hilbert space.
// Nothing here touches the sector machinery; the Hamiltonian is assembled
// from explicit single-site Pauli matrices and reduced states come from an
// explicit partial trace. Intended for N <= 10.

#include <Eigen/Core>

#include "spinchain/model.hpp"

namespace spinchain::oracle {

inline constexpr int kMaxOracleSites = 12;

/// Dense sum_{m<n} J_mn (X_m X_n + Y_m Y_n). Basis index = occupation mask,
/// with the local convention Z|0> = -|0>, Z|1> = +|1>.
[[nodiscard]] Eigen::MatrixXcd full_hamiltonian(const CouplingMatrix &coupling);

/// sum_m Z_m as a diagonal.
[[nodiscard]] Eigen::VectorXd total_z(int n_sites);

[[nodiscard]] Eigen::VectorXcd embed(const StateVector &psi);
/// Amplitudes of the full vector on the members of a sector basis.
[[nodiscard]] Eigen::VectorXcd restrict_to(const Eigen::VectorXcd &full, const SectorBasis &basis);

/// exp(-i H t) via eigendecomposition of the full complex Hermitian matrix.
class FullEvolver {
  public:
    explicit FullEvolver(const Eigen::MatrixXcd &h);
    [[nodiscard]] Eigen::VectorXcd evolve(const Eigen::VectorXcd &psi, double t) const;

  private:
    Eigen::VectorXd  energies_;
    Eigen::MatrixXcd vectors_;
};

/// rho_A = Tr_{complement} |psi><psi|, index = bits of A compressed to the
/// low end in site order.
[[nodiscard]] Eigen::MatrixXcd partial_trace(const Eigen::VectorXcd &full, int n_sites, Mask a);

/// -Tr rho_A log2 rho_A from the eigenvalues of the explicit partial trace.
[[nodiscard]] double entropy(const Eigen::VectorXcd &full, int n_sites, Mask a);

/// Random normalized sector state (Gaussian amplitudes).
[[nodiscard]] StateVector random_state(std::shared_ptr<const SectorBasis> basis, std::uint64_t seed);

} // namespace spinchain::oracle
