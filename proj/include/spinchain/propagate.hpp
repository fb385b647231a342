#pragma once

#include <Eigen/Core>
#include <functional>
#include <optional>
#include <vector>

#include "spinchain/model.hpp"

namespace spinchain {

/// Sample times, either physical (units of 1/j0) or Kac-rescaled (t * kac).
struct TimeGrid {
    std::vector<double> times;
    bool                kac_rescaled = false;

    /// n_points equally spaced samples on [0, t_max].
    [[nodiscard]] static TimeGrid uniform(double t_max, int n_points, bool kac_rescaled = false);

    void validate() const;

    /// Physical evolution time of sample i for a model with Kac constant kac.
    [[nodiscard]] double physical(std::size_t i, double kac) const { return kac_rescaled ? times[i] / kac : times[i]; }
    [[nodiscard]] std::size_t size() const noexcept { return times.size(); }
};

struct Trajectory {
    TimeGrid                 grid;
    std::vector<StateVector> states;
    std::optional<ModelSpec> spec;
};

using HamiltonianAction = std::function<void(const Eigen::VectorXcd &, Eigen::VectorXcd &)>;

/// Exact propagator from the full eigendecomposition of a sector block.
class DenseEvolver {
  public:
    static constexpr std::size_t kDefaultThreshold = 4096;

    explicit DenseEvolver(const SectorHamiltonian &h, std::size_t threshold = kDefaultThreshold);
    /// For an already assembled real symmetric matrix (no threshold check).
    explicit DenseEvolver(const Eigen::MatrixXd &h);

    /// exp(-i H t) psi, any sign of t.
    [[nodiscard]] Eigen::VectorXcd evolve(const Eigen::VectorXcd &psi, double t) const;

    [[nodiscard]] const Eigen::VectorXd &eigenvalues() const noexcept { return energies_; }

  private:
    Eigen::VectorXd energies_;
    Eigen::MatrixXd vectors_;
};

struct KrylovOptions {
    double tol   = 1e-10; // per-step local error bound
    int    m_max = 40;    // largest Krylov subspace
};

struct KrylovStats {
    std::size_t steps    = 0;
    std::size_t matvecs  = 0;
    std::size_t halvings = 0;
};

/// Adaptive-step Lanczos propagator. Each step builds an orthonormal Krylov
/// basis of at most m_max vectors, then picks the largest step whose a
/// posteriori error estimate beta_m |[exp(-i T h)]_{m-1,0}| is below tol.
class KrylovEvolver {
  public:
    KrylovEvolver(HamiltonianAction apply, KrylovOptions opts = {});

    /// psi <- exp(-i H dt) psi.
    void advance(Eigen::VectorXcd &psi, double dt);

    [[nodiscard]] const KrylovStats &stats() const noexcept { return stats_; }

  private:
    HamiltonianAction             apply_;
    KrylovOptions                 opts_;
    KrylovStats                   stats_;
    double                        last_step_ = 0;
    std::vector<Eigen::VectorXcd> basis_;
    Eigen::VectorXcd              work_;
};

[[nodiscard]] Trajectory evolve_dense(const CouplingMatrix &coupling, std::shared_ptr<const SectorBasis> basis, const StateVector &psi0,
                                      const TimeGrid &grid, std::size_t threshold = DenseEvolver::kDefaultThreshold);

/// Grid times are physical unless grid.kac_rescaled, in which case kac must be given.
[[nodiscard]] Trajectory evolve_krylov(const HamiltonianAction &apply, const StateVector &psi0, const TimeGrid &grid, double tol = 1e-10,
                                       int m_max = 40, std::optional<double> kac = std::nullopt);

/// exp(-i h t) with h[m][n] = 2 J_mn the single-excitation hopping matrix.
[[nodiscard]] Eigen::MatrixXcd onebody_propagator(const CouplingMatrix &coupling, double t);

enum class EngineKind { Auto, Dense, Krylov };

struct EngineOptions {
    EngineKind    kind            = EngineKind::Auto;
    std::size_t   dense_threshold = DenseEvolver::kDefaultThreshold;
    KrylovOptions krylov          = {};
};

/// Runs psi0 along grid with the chosen engine and hands each state to
/// observer(i, state) without keeping the trajectory in memory. Returns
/// the engine actually used (Auto resolves by dense_threshold).
EngineKind for_each_state(const SectorHamiltonian &h, const StateVector &psi0, const TimeGrid &grid, const EngineOptions &opts,
                          const std::function<void(std::size_t, const StateVector &)> &observer);

[[nodiscard]] const char *engine_name(EngineKind k) noexcept;

} // namespace spinchain
