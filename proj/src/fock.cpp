#include "hcb/fock.hpp"

#include "hcb/errors.hpp"

#include <Eigen/Eigenvalues>

#include <cmath>
#include <limits>
#include <string>

namespace hcb {

FockVector box_state(const FockBasis& basis, int i1, int i2) {
    const int width = i2 - i1 + 1;
    if (i1 < 1 || i2 > basis.sites() || i1 > i2)
        throw UsageError("box_state: box [" + std::to_string(i1) + "," + std::to_string(i2) +
                         "] outside chain of L=" + std::to_string(basis.sites()));
    if (width != basis.particles())
        throw UsageError("box_state: box width " + std::to_string(width) +
                         " != N=" + std::to_string(basis.particles()));
    std::uint64_t mask = 0;
    for (int i = i1; i <= i2; ++i) mask |= 1ULL << (i - 1);
    FockVector v;
    v.basis = &basis;
    v.amps = VectorXcd::Zero(basis.dim());
    v.amps[basis.index_of(mask)] = 1.0;
    return v;
}

std::vector<double> density(const FockVector& state, int threads) {
    return par::density(*state.basis, {state.amps.data(), static_cast<size_t>(state.amps.size())},
                        threads);
}

double half_current(const FockVector& state, double J, int threads) {
    return par::half_current(*state.basis, J,
                             {state.amps.data(), static_cast<size_t>(state.amps.size())}, threads);
}

double energy(const FockVector& state, const ModelParams& params, int threads) {
    return par::energy_expectation(*state.basis, params,
                                   {state.amps.data(), static_cast<size_t>(state.amps.size())},
                                   threads);
}

double total_particles(const FockVector& state, int threads) {
    const auto n = density(state, threads);
    double total = 0.0;
    for (double x : n) total += x;
    return total;
}

FockEvolver::FockEvolver(const FockBasis& basis, const ModelParams& params, double tol, int threads,
                         bool force_krylov)
    : basis_(&basis), params_(params), tol_(tol), threads_(threads),
      dense_(!force_krylov && basis.dim() <= 2000) {
    if (dense_) {
        Eigen::SelfAdjointEigenSolver<MatrixXcd> es(dense_hamiltonian(params, basis));
        if (es.info() != Eigen::Success)
            throw std::runtime_error("FockEvolver: dense eigendecomposition failed");
        evals_ = es.eigenvalues();
        evecs_ = es.eigenvectors();
    }
}

void FockEvolver::step(FockVector& state, double dt) const {
    if (state.basis != basis_)
        throw UsageError("FockEvolver: state basis mismatch");
    if (dt == 0.0) return;
    if (dense_) {
        VectorXcd c = evecs_.adjoint() * state.amps;
        for (Eigen::Index k = 0; k < c.size(); ++k)
            c[k] *= std::exp(Complex(0.0, -evals_[k] * dt));
        state.amps = evecs_ * c;
    } else {
        krylov_step(state.amps, dt, tol_, 0);
    }
    state.amps.normalize(); // evolution is unitary; scrub roundoff drift
}

void FockEvolver::krylov_step(VectorXcd& v, double dt, double tol, int depth) const {
    constexpr int kMaxSubspace = 30;
    constexpr int kMaxDepth = 24;
    const std::int64_t dim = basis_->dim();
    const double vnorm = v.norm();
    if (vnorm == 0.0) return;

    std::vector<VectorXcd> basis_vecs;
    basis_vecs.reserve(kMaxSubspace + 1);
    basis_vecs.push_back(v / vnorm);
    std::vector<double> alpha, beta; // T tridiagonal
    VectorXcd w(dim);

    const int mmax = static_cast<int>(std::min<std::int64_t>(kMaxSubspace, dim));
    double err_est = std::numeric_limits<double>::infinity();
    Eigen::VectorXcd y;

    for (int m = 1; m <= mmax; ++m) {
        const VectorXcd& vm = basis_vecs.back();
        par::apply_hamiltonian(*basis_, params_, {vm.data(), static_cast<size_t>(vm.size())},
                               {w.data(), static_cast<size_t>(w.size())}, threads_);
        const double a = std::real(vm.dot(w));
        alpha.push_back(a);
        w -= a * vm;
        if (m > 1) w -= beta.back() * basis_vecs[static_cast<size_t>(m - 2)];
        for (const auto& u : basis_vecs) w -= u.dot(w) * u; // full reorthogonalization
        const double b = w.norm();

        // exp(-i dt T) e1 in the current subspace
        MatrixXd T = MatrixXd::Zero(m, m);
        for (int i = 0; i < m; ++i) {
            T(i, i) = alpha[static_cast<size_t>(i)];
            if (i + 1 < m) T(i, i + 1) = T(i + 1, i) = beta[static_cast<size_t>(i)];
        }
        Eigen::SelfAdjointEigenSolver<MatrixXd> es(T);
        VectorXcd phases(m);
        for (int k = 0; k < m; ++k) phases[k] = std::exp(Complex(0.0, -es.eigenvalues()[k] * dt));
        y = es.eigenvectors() * (phases.asDiagonal() * es.eigenvectors().row(0).transpose().cast<Complex>());

        err_est = b * std::abs(y[m - 1]) * std::abs(dt);
        if (b < 1e-14 || err_est <= tol || m == mmax) {
            if (b >= 1e-14 && err_est > tol && m == mmax) break; // not converged, split step
            VectorXcd result = VectorXcd::Zero(dim);
            for (int i = 0; i < m; ++i) result += y[i] * basis_vecs[static_cast<size_t>(i)];
            v = vnorm * result;
            return;
        }
        beta.push_back(b);
        basis_vecs.push_back(w / b);
    }

    if (depth >= kMaxDepth)
        throw ConvergenceError("FockEvolver: Krylov step failed to converge, residual estimate " +
                               std::to_string(err_est) + " at dt=" + std::to_string(dt));
    krylov_step(v, dt / 2, tol / 2, depth + 1);
    krylov_step(v, dt / 2, tol / 2, depth + 1);
}

GroundStateResult ground_state(const FockBasis& basis, const ModelParams& params, int threads) {
    GroundStateResult res;
    res.state.basis = &basis;
    const std::int64_t dim = basis.dim();

    if (dim <= 2000) {
        Eigen::SelfAdjointEigenSolver<MatrixXcd> es(dense_hamiltonian(params, basis));
        if (es.info() != Eigen::Success)
            throw std::runtime_error("ground_state: dense eigendecomposition failed");
        res.energy = es.eigenvalues()[0];
        res.state.amps = es.eigenvectors().col(0);
        res.degenerate = dim > 1 && es.eigenvalues()[1] - es.eigenvalues()[0] < 1e-8;
        return res;
    }

    // Lanczos lowest eigenpair with full reorthogonalization, grown in blocks.
    constexpr int kBlock = 30;
    constexpr int kMaxIter = 400;
    std::vector<VectorXcd> vecs;
    vecs.reserve(kBlock);
    VectorXcd v0 = VectorXcd::Zero(dim);
    // deterministic pseudo-random start spread over the sector
    for (std::int64_t i = 0; i < dim; ++i)
        v0[i] = Complex(std::cos(0.7 * static_cast<double>(i) + 0.3), 0.0);
    v0.normalize();
    vecs.push_back(v0);
    std::vector<double> alpha, beta;
    VectorXcd w(dim);
    double e0 = 0.0, gap = 0.0, resid = std::numeric_limits<double>::infinity();
    Eigen::MatrixXd ritz_vecs;

    int m = 0;
    while (m < kMaxIter && m < dim) {
        const VectorXcd& vm = vecs.back();
        par::apply_hamiltonian(basis, params, {vm.data(), static_cast<size_t>(vm.size())},
                               {w.data(), static_cast<size_t>(w.size())}, threads);
        const double a = std::real(vm.dot(w));
        alpha.push_back(a);
        w -= a * vm;
        if (m > 0) w -= beta.back() * vecs[static_cast<size_t>(m - 1)];
        for (const auto& u : vecs) w -= u.dot(w) * u;
        const double b = w.norm();
        ++m;

        if (m % kBlock == 0 || b < 1e-13 || m == kMaxIter || m == dim) {
            MatrixXd T = MatrixXd::Zero(m, m);
            for (int i = 0; i < m; ++i) {
                T(i, i) = alpha[static_cast<size_t>(i)];
                if (i + 1 < m) T(i, i + 1) = T(i + 1, i) = beta[static_cast<size_t>(i)];
            }
            Eigen::SelfAdjointEigenSolver<MatrixXd> es(T);
            e0 = es.eigenvalues()[0];
            gap = m > 1 ? es.eigenvalues()[1] - e0 : 0.0;
            ritz_vecs = es.eigenvectors();
            resid = b * std::abs(es.eigenvectors()(m - 1, 0));
            if (resid < 1e-10 * std::max(1.0, std::abs(e0)) || b < 1e-13) break;
        }
        if (b < 1e-13) break;
        beta.push_back(b);
        vecs.push_back(w / b);
    }
    if (resid > 1e-8 * std::max(1.0, std::abs(e0)))
        throw ConvergenceError("ground_state: Lanczos residual " + std::to_string(resid) +
                               " after " + std::to_string(m) + " iterations");

    VectorXcd gs = VectorXcd::Zero(dim);
    for (int i = 0; i < m; ++i) gs += ritz_vecs(i, 0) * vecs[static_cast<size_t>(i)];
    gs.normalize();
    res.energy = e0;
    res.state.amps = gs;
    res.degenerate = gap < 1e-8;
    return res;
}

PairCreationResult apply_pair_creation(const FockVector& state, int site,
                                       const FockBasis& target_basis) {
    const FockBasis& src = *state.basis;
    if (site < 1 || site + 1 > src.sites())
        throw UsageError("apply_pair_creation: site " + std::to_string(site) + " out of range");
    if (target_basis.sites() != src.sites() || target_basis.particles() != src.particles() + 2)
        throw UsageError("apply_pair_creation: target basis must be (L, N+2)");

    const std::uint64_t mask = 3ULL << (site - 1);
    PairCreationResult res;
    res.state.basis = &target_basis;
    res.state.amps = VectorXcd::Zero(target_basis.dim());
    double w2 = 0.0;
    for (std::int64_t a = 0; a < src.dim(); ++a) {
        const std::uint64_t s = src.state(a);
        if (s & mask) continue; // hard-core projection
        const Complex amp = state.amps[a];
        res.state.amps[target_basis.index_of(s | mask)] = amp;
        w2 += std::norm(amp);
    }
    if (w2 < 1e-14)
        throw UsageError("apply_pair_creation: zero norm, quench impossible from this state");
    res.state.amps /= std::sqrt(w2);
    res.weight = w2;
    return res;
}

} // namespace hcb
