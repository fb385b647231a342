#include "spinchain/propagate.hpp"

#include <Eigen/Eigenvalues>
#include <cmath>
#include <fmt/format.h>

namespace spinchain {

TimeGrid TimeGrid::uniform(double t_max, int n_points, bool kac_rescaled) {
    if(n_points < 1) throw ArgumentError(fmt::format("n_points must be >= 1, got {}", n_points));
    if(!std::isfinite(t_max) || t_max < 0 || (n_points > 1 && t_max == 0)) throw ArgumentError(fmt::format("invalid t_max {}", t_max));
    TimeGrid g;
    g.kac_rescaled = kac_rescaled;
    g.times.resize(static_cast<std::size_t>(n_points));
    for(int i = 0; i < n_points; ++i) g.times[static_cast<std::size_t>(i)] = n_points == 1 ? t_max : t_max * i / (n_points - 1);
    return g;
}

void TimeGrid::validate() const {
    if(times.empty()) throw ArgumentError("empty time grid");
    if(!std::isfinite(times[0]) || times[0] < 0) throw ArgumentError("time grid must start at a finite t >= 0");
    for(std::size_t i = 1; i < times.size(); ++i)
        if(!std::isfinite(times[i]) || !(times[i] > times[i - 1])) throw ArgumentError(fmt::format("time grid not strictly increasing at index {}", i));
}

const char *engine_name(EngineKind k) noexcept {
    switch(k) {
        case EngineKind::Auto: return "auto";
        case EngineKind::Dense: return "dense";
        case EngineKind::Krylov: return "krylov";
    }
    return "?";
}

DenseEvolver::DenseEvolver(const SectorHamiltonian &h, std::size_t threshold) {
    if(h.dim() > threshold)
        throw CapacityError(fmt::format("sector dimension {} exceeds the dense threshold {}; use the Krylov engine", h.dim(), threshold));
    *this = DenseEvolver(h.dense());
}

DenseEvolver::DenseEvolver(const Eigen::MatrixXd &h) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(h);
    if(es.info() != Eigen::Success) throw NumericalError("dense eigendecomposition failed");
    energies_ = es.eigenvalues();
    vectors_  = es.eigenvectors();
}

Eigen::VectorXcd DenseEvolver::evolve(const Eigen::VectorXcd &psi, double t) const {
    if(psi.size() != energies_.size()) throw ArgumentError("state dimension does not match the Hamiltonian");
    if(t == 0.0) return psi;
    const Eigen::VectorXd re = vectors_.transpose() * psi.real();
    const Eigen::VectorXd im = vectors_.transpose() * psi.imag();
    Eigen::VectorXd       cr(re.size()), ci(re.size());
    for(Eigen::Index i = 0; i < re.size(); ++i) {
        const cplx c = cplx(re[i], im[i]) * std::polar(1.0, -energies_[i] * t);
        cr[i]        = c.real();
        ci[i]        = c.imag();
    }
    Eigen::VectorXcd out(psi.size());
    out.real() = vectors_ * cr;
    out.imag() = vectors_ * ci;
    return out;
}

namespace {

/// exp(-i T h) e_0 for the real symmetric tridiagonal T.
Eigen::VectorXcd tridiagonal_exp(const std::vector<double> &diag, const std::vector<double> &off, std::size_t m, double h) {
    const auto      mm = static_cast<Eigen::Index>(m);
    Eigen::VectorXd d(mm), e(std::max<Eigen::Index>(mm - 1, 0));
    for(Eigen::Index i = 0; i < mm; ++i) d[i] = diag[static_cast<std::size_t>(i)];
    for(Eigen::Index i = 0; i + 1 < mm; ++i) e[i] = off[static_cast<std::size_t>(i)];
    Eigen::VectorXcd y(mm);
    if(mm == 1) {
        y[0] = std::polar(1.0, -d[0] * h);
        return y;
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es;
    es.computeFromTridiagonal(d, e, Eigen::ComputeEigenvectors);
    const Eigen::MatrixXd &q = es.eigenvectors();
    Eigen::VectorXcd       w(mm);
    for(Eigen::Index k = 0; k < mm; ++k) w[k] = q(0, k) * std::polar(1.0, -es.eigenvalues()[k] * h);
    for(Eigen::Index i = 0; i < mm; ++i) {
        cplx acc = 0;
        for(Eigen::Index k = 0; k < mm; ++k) acc += q(i, k) * w[k];
        y[i] = acc;
    }
    return y;
}

} // namespace

KrylovEvolver::KrylovEvolver(HamiltonianAction apply, KrylovOptions opts) : apply_(std::move(apply)), opts_(opts) {
    if(!(opts_.tol > 0)) throw ArgumentError(fmt::format("Krylov tol must be > 0, got {}", opts_.tol));
    if(opts_.m_max < 2) throw ArgumentError(fmt::format("Krylov m_max must be >= 2, got {}", opts_.m_max));
}

void KrylovEvolver::advance(Eigen::VectorXcd &psi, double dt) {
    if(dt == 0.0) return;
    const double sign      = dt > 0 ? 1.0 : -1.0;
    double       remaining = std::abs(dt);
    const double h_min     = 1e-14 * std::max(1.0, remaining);
    double       h         = last_step_ > 0 ? std::min(last_step_, remaining) : remaining;
    const auto   m_max     = static_cast<std::size_t>(opts_.m_max);
    if(basis_.size() < m_max) basis_.resize(m_max);

    std::vector<double> diag, off;
    while(remaining > 0) {
        h              = std::min(h, remaining);
        const double nrm = psi.norm();
        if(nrm == 0.0) return;
        basis_[0] = psi / nrm;
        diag.clear();
        off.clear();

        std::size_t      m         = 0;
        bool             converged = false;
        double           beta      = 0;
        Eigen::VectorXcd y;
        for(std::size_t j = 0; j < m_max; ++j) {
            apply_(basis_[j], work_);
            ++stats_.matvecs;
            const double a = basis_[j].dot(work_).real();
            work_ -= a * basis_[j];
            if(j > 0) work_ -= off[j - 1] * basis_[j - 1];
            // full reorthogonalization; m_max is small
            for(std::size_t i = 0; i <= j; ++i) work_ -= basis_[i].dot(work_) * basis_[i];
            beta = work_.norm();
            diag.push_back(a);
            m = j + 1;
            y = tridiagonal_exp(diag, off, m, sign * h);
            if(beta * std::abs(y[static_cast<Eigen::Index>(m - 1)]) <= opts_.tol) {
                converged = true;
                break;
            }
            if(m == m_max) break;
            off.push_back(beta);
            basis_[j + 1] = work_ / beta;
        }

        if(!converged) {
            while(true) {
                h *= 0.5;
                ++stats_.halvings;
                if(h < h_min)
                    throw ConvergenceError(fmt::format("Krylov step did not converge: step {} below minimum {}, residual beta {} at m = {}", h, h_min,
                                                       beta, m));
                y = tridiagonal_exp(diag, off, m, sign * h);
                if(beta * std::abs(y[static_cast<Eigen::Index>(m - 1)]) <= opts_.tol) break;
            }
        }

        Eigen::VectorXcd next = Eigen::VectorXcd::Zero(psi.size());
        for(std::size_t i = 0; i < m; ++i) next += y[static_cast<Eigen::Index>(i)] * basis_[i];
        psi = nrm * next;
        remaining -= h;
        if(remaining < h_min) remaining = 0;
        ++stats_.steps;
        last_step_ = h;
        // grow again after an easy step
        if(converged && m < m_max / 2) h *= 2;
    }
}

Trajectory evolve_dense(const CouplingMatrix &coupling, std::shared_ptr<const SectorBasis> basis, const StateVector &psi0, const TimeGrid &grid,
                        std::size_t threshold) {
    grid.validate();
    if(!psi0.basis || !basis || !(*psi0.basis == *basis)) throw ArgumentError("initial state does not live on the given basis");
    SectorHamiltonian h(coupling, basis);
    DenseEvolver      ev(h, threshold);
    Trajectory        traj{grid, {}, coupling.spec};
    traj.states.reserve(grid.size());
    for(std::size_t i = 0; i < grid.size(); ++i)
        traj.states.push_back(StateVector{basis, ev.evolve(psi0.amplitudes, grid.physical(i, coupling.kac))});
    return traj;
}

Trajectory evolve_krylov(const HamiltonianAction &apply, const StateVector &psi0, const TimeGrid &grid, double tol, int m_max,
                         std::optional<double> kac) {
    grid.validate();
    if(grid.kac_rescaled && !kac) throw ArgumentError("Kac-rescaled grid needs the Kac constant");
    KrylovEvolver    ev(apply, {tol, m_max});
    Trajectory       traj{grid, {}, std::nullopt};
    Eigen::VectorXcd psi  = psi0.amplitudes;
    double           prev = 0;
    for(std::size_t i = 0; i < grid.size(); ++i) {
        const double t = grid.physical(i, kac.value_or(1.0));
        ev.advance(psi, t - prev);
        prev = t;
        traj.states.push_back(StateVector{psi0.basis, psi});
    }
    return traj;
}

Eigen::MatrixXcd onebody_propagator(const CouplingMatrix &coupling, double t) {
    if(!std::isfinite(t)) throw ArgumentError("time must be finite");
    const auto      n = static_cast<Eigen::Index>(coupling.n_sites());
    if(t == 0.0) return Eigen::MatrixXcd::Identity(n, n);
    Eigen::MatrixXd h(n, n);
    for(Eigen::Index m = 0; m < n; ++m)
        for(Eigen::Index k = 0; k < n; ++k) h(m, k) = 2.0 * coupling(static_cast<int>(m), static_cast<int>(k));
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(h);
    Eigen::VectorXcd                               phase(n);
    for(Eigen::Index i = 0; i < n; ++i) phase[i] = std::polar(1.0, -es.eigenvalues()[i] * t);
    const Eigen::MatrixXcd v = es.eigenvectors().cast<cplx>();
    return v * phase.asDiagonal() * v.transpose();
}

EngineKind for_each_state(const SectorHamiltonian &h, const StateVector &psi0, const TimeGrid &grid, const EngineOptions &opts,
                          const std::function<void(std::size_t, const StateVector &)> &observer) {
    grid.validate();
    if(!psi0.basis || !(*psi0.basis == *h.basis())) throw ArgumentError("initial state does not live on the Hamiltonian's basis");
    EngineKind kind = opts.kind;
    if(kind == EngineKind::Auto) kind = h.dim() <= opts.dense_threshold ? EngineKind::Dense : EngineKind::Krylov;
    const double kac = h.coupling().kac;

    if(kind == EngineKind::Dense) {
        DenseEvolver ev(h, opts.dense_threshold);
        for(std::size_t i = 0; i < grid.size(); ++i) observer(i, StateVector{psi0.basis, ev.evolve(psi0.amplitudes, grid.physical(i, kac))});
        return kind;
    }
    KrylovEvolver ev([&h](const Eigen::VectorXcd &in, Eigen::VectorXcd &out) { h.apply(in, out); }, opts.krylov);
    StateVector   psi  = psi0;
    double        prev = 0;
    for(std::size_t i = 0; i < grid.size(); ++i) {
        const double t = grid.physical(i, kac);
        ev.advance(psi.amplitudes, t - prev);
        prev = t;
        observer(i, psi);
    }
    return kind;
}

} // namespace spinchain
