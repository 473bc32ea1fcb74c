#include "hcb/errors.hpp"
#include "hcb/mps.hpp"

#include <cmath>
#include <limits>
#include <random>
#include <sstream>
#include <string>
#include <vector>

namespace hcb {

namespace {

using Op = Eigen::Matrix2cd;

// MPO with per-site blocks op(a,b), left/right bond dims wl/wr.
struct MpoSite {
    int wl = 0, wr = 0;
    std::vector<Op> ops; // wl * wr, row-major
    Op& at(int a, int b) { return ops[static_cast<size_t>(a * wr + b)]; }
    const Op& at(int a, int b) const { return ops[static_cast<size_t>(a * wr + b)]; }
};

using Mpo = std::vector<MpoSite>;

// Automaton rows: 0 ready, 1 b^dag placed, 2 b placed, 3 n placed (three-body
// chain, adjacent continuation only), 4 nn placed, 5 n placed (number penalty,
// carried by identity), 6 done.
Mpo build_mpo(const ModelParams& params, double lambda, int n_target) {
    const int L = params.sites;
    constexpr int w = 7;
    const Op id = Op::Identity(), zero = Op::Zero();
    Op bop = Op::Zero(), bdag = Op::Zero(), nop = Op::Zero();
    bop(0, 1) = 1.0; // <0| b |1>
    bdag(1, 0) = 1.0;
    nop(1, 1) = 1.0;

    MpoSite full;
    full.wl = full.wr = w;
    full.ops.assign(static_cast<size_t>(w * w), zero);
    full.at(0, 0) = id;
    full.at(0, 1) = bdag;
    full.at(0, 2) = bop;
    full.at(0, 3) = nop;
    full.at(1, 6) = -params.hop * bop;
    full.at(2, 6) = -params.hop * bdag;
    full.at(3, 4) = nop;
    full.at(4, 6) = params.three_body * nop;
    full.at(6, 6) = id;
    if (lambda != 0.0) {
        // lambda (N_hat - N)^2 = lambda[(1-2N) sum n_i + 2 sum_{i<j} n_i n_j + N^2]
        full.at(0, 5) = nop;
        full.at(5, 5) = id;
        full.at(5, 6) = 2.0 * lambda * nop;
        full.at(0, 6) = lambda * (1.0 - 2.0 * n_target) * nop +
                        (lambda * n_target * n_target / L) * id;
    }

    Mpo mpo(static_cast<size_t>(L), full);
    MpoSite first;
    first.wl = 1;
    first.wr = w;
    first.ops.assign(static_cast<size_t>(w), zero);
    for (int b = 0; b < w; ++b) first.at(0, b) = full.at(0, b);
    mpo.front() = first;

    MpoSite last;
    last.wl = w;
    last.wr = 1;
    last.ops.assign(static_cast<size_t>(w), zero);
    for (int a = 0; a < w; ++a) last.at(a, 0) = full.at(a, 6);
    mpo.back() = last;
    return mpo;
}

using Env = std::vector<MatrixXcd>; // one chi x chi block per MPO channel

Env contract_left(const Env& left, const MpsState::SiteTensor& t, const MpoSite& wsite) {
    Env out(static_cast<size_t>(wsite.wr));
    const auto dr = t[0].cols();
    for (int b = 0; b < wsite.wr; ++b) out[static_cast<size_t>(b)] = MatrixXcd::Zero(dr, dr);
    for (int a = 0; a < wsite.wl; ++a) {
        if (left[static_cast<size_t>(a)].size() == 0) continue;
        const std::array<MatrixXcd, 2> la = {left[static_cast<size_t>(a)] * t[0],
                                             left[static_cast<size_t>(a)] * t[1]};
        for (int b = 0; b < wsite.wr; ++b) {
            const Op& o = wsite.at(a, b);
            if (o.isZero(0)) continue;
            for (int sp = 0; sp < 2; ++sp)
                for (int s = 0; s < 2; ++s) {
                    const Complex c = o(sp, s);
                    if (c != Complex(0, 0))
                        out[static_cast<size_t>(b)] +=
                            c * (t[static_cast<size_t>(sp)].adjoint() * la[static_cast<size_t>(s)]);
                }
        }
    }
    return out;
}

Env contract_right(const Env& right, const MpsState::SiteTensor& t, const MpoSite& wsite) {
    Env out(static_cast<size_t>(wsite.wl));
    const auto dl = t[0].rows();
    for (int a = 0; a < wsite.wl; ++a) out[static_cast<size_t>(a)] = MatrixXcd::Zero(dl, dl);
    for (int b = 0; b < wsite.wr; ++b) {
        if (right[static_cast<size_t>(b)].size() == 0) continue;
        const std::array<MatrixXcd, 2> rb = {t[0] * right[static_cast<size_t>(b)],
                                             t[1] * right[static_cast<size_t>(b)]};
        for (int a = 0; a < wsite.wl; ++a) {
            const Op& o = wsite.at(a, b);
            if (o.isZero(0)) continue;
            for (int sp = 0; sp < 2; ++sp)
                for (int s = 0; s < 2; ++s) {
                    const Complex c = o(sp, s);
                    if (c != Complex(0, 0))
                        out[static_cast<size_t>(a)] +=
                            c * (rb[static_cast<size_t>(s)] * t[static_cast<size_t>(sp)].adjoint());
                }
        }
    }
    return out;
}

// theta blocks indexed 2*s1 + s2, each (chi_l x chi_r)
using Theta = std::array<MatrixXcd, 4>;

Theta apply_heff(const Env& lenv, const Env& renv, const MpoSite& w1, const MpoSite& w2,
                 const Theta& th) {
    const auto dl = th[0].rows(), dr = th[0].cols();
    Theta out;
    for (auto& m : out) m = MatrixXcd::Zero(dl, dr);
    for (int a = 0; a < w1.wl; ++a) {
        if (lenv[static_cast<size_t>(a)].size() == 0) continue;
        Theta lth;
        for (int p = 0; p < 4; ++p)
            lth[static_cast<size_t>(p)] = lenv[static_cast<size_t>(a)] * th[static_cast<size_t>(p)];
        for (int b = 0; b < w1.wr; ++b) {
            const Op& o1 = w1.at(a, b);
            if (o1.isZero(0)) continue;
            Theta mid; // mid[2*s1' + s2] = sum_{s1} W1(a,b)(s1',s1) lth[2*s1 + s2]
            for (int p = 0; p < 4; ++p) mid[static_cast<size_t>(p)] = MatrixXcd::Zero(dl, dr);
            for (int sp = 0; sp < 2; ++sp)
                for (int s = 0; s < 2; ++s) {
                    const Complex c = o1(sp, s);
                    if (c == Complex(0, 0)) continue;
                    for (int s2 = 0; s2 < 2; ++s2)
                        mid[static_cast<size_t>(2 * sp + s2)] +=
                            c * lth[static_cast<size_t>(2 * s + s2)];
                }
            for (int c2 = 0; c2 < w2.wr; ++c2) {
                if (renv[static_cast<size_t>(c2)].size() == 0) continue;
                const Op& o2 = w2.at(b, c2);
                if (o2.isZero(0)) continue;
                for (int sp = 0; sp < 2; ++sp)
                    for (int s = 0; s < 2; ++s) {
                        const Complex c = o2(sp, s);
                        if (c == Complex(0, 0)) continue;
                        for (int s1 = 0; s1 < 2; ++s1)
                            out[static_cast<size_t>(2 * s1 + sp)] +=
                                c * (mid[static_cast<size_t>(2 * s1 + s)] *
                                     renv[static_cast<size_t>(c2)].transpose());
                    }
            }
        }
    }
    return out;
}

double theta_norm(const Theta& t) {
    double n2 = 0.0;
    for (const auto& m : t) n2 += m.squaredNorm();
    return std::sqrt(n2);
}

Complex theta_dot(const Theta& a, const Theta& b) {
    Complex d = 0.0;
    for (int p = 0; p < 4; ++p)
        d += (a[static_cast<size_t>(p)].conjugate().cwiseProduct(b[static_cast<size_t>(p)])).sum();
    return d;
}

void theta_axpy(Theta& y, Complex alpha, const Theta& x) {
    for (int p = 0; p < 4; ++p) y[static_cast<size_t>(p)] += alpha * x[static_cast<size_t>(p)];
}

// Lanczos lowest eigenpair of the effective Hamiltonian, warm-started at th.
double lanczos_lowest(const Env& lenv, const Env& renv, const MpoSite& w1, const MpoSite& w2,
                      Theta& th, int max_iter) {
    std::vector<Theta> vecs;
    std::vector<double> alpha, beta;
    const double nrm = theta_norm(th);
    for (auto& m : th) m /= nrm;
    vecs.push_back(th);
    double e0 = 0.0;
    Eigen::MatrixXd ritz;
    int m = 0;
    const long dim = 4 * th[0].rows() * th[0].cols();
    max_iter = static_cast<int>(std::min<long>(max_iter, dim));
    for (int it = 0; it < max_iter; ++it) {
        Theta w = apply_heff(lenv, renv, w1, w2, vecs.back());
        const double a = theta_dot(vecs.back(), w).real();
        alpha.push_back(a);
        theta_axpy(w, -a, vecs.back());
        if (m > 0) theta_axpy(w, -beta.back(), vecs[static_cast<size_t>(m - 1)]);
        for (const auto& u : vecs) theta_axpy(w, -theta_dot(u, w), u);
        const double b = theta_norm(w);
        ++m;

        MatrixXd t = MatrixXd::Zero(m, m);
        for (int i = 0; i < m; ++i) {
            t(i, i) = alpha[static_cast<size_t>(i)];
            if (i + 1 < m) t(i, i + 1) = t(i + 1, i) = beta[static_cast<size_t>(i)];
        }
        Eigen::SelfAdjointEigenSolver<MatrixXd> es(t);
        e0 = es.eigenvalues()[0];
        ritz = es.eigenvectors();
        const double resid = b * std::abs(ritz(m - 1, 0));
        if (resid < 1e-9 * std::max(1.0, std::abs(e0)) || b < 1e-13) break;
        beta.push_back(b);
        for (auto& mm : w) mm /= b;
        vecs.push_back(std::move(w));
    }
    Theta best;
    for (auto& mm : best) mm = MatrixXcd::Zero(th[0].rows(), th[0].cols());
    for (int i = 0; i < m; ++i) theta_axpy(best, ritz(i, 0), vecs[static_cast<size_t>(i)]);
    const double bn = theta_norm(best);
    for (auto& mm : best) mm /= bn;
    th = std::move(best);
    return e0;
}

std::vector<int> spread_occupations(int L, int N) {
    std::vector<int> occ(static_cast<size_t>(L), 0);
    double err = 0.0;
    for (int i = 0; i < L; ++i) {
        err += static_cast<double>(N) / L;
        if (err >= 1.0 - 1e-12) {
            occ[static_cast<size_t>(i)] = 1;
            err -= 1.0;
        }
    }
    return occ;
}

double mpo_expectation(MpsState& state, const Mpo& mpo) {
    const int L = state.sites();
    state.canonicalize(1);
    Env env(1);
    env[0] = MatrixXcd::Ones(1, 1);
    for (int i = 0; i < L; ++i)
        env = contract_left(env, state.tensors()[static_cast<size_t>(i)], mpo[static_cast<size_t>(i)]);
    const double n = state.norm();
    return env[0](0, 0).real() / (n * n);
}

} // namespace

DmrgResult ground_state_search(const ModelParams& params, int particles, const DmrgOptions& opts) {
    const int L = params.sites;
    if (particles < 0 || particles > L)
        throw UsageError("ground_state_search: need 0 <= N <= L");

    const Mpo mpo = build_mpo(params, opts.penalty, particles);
    const Mpo plain = build_mpo(params, 0.0, particles);

    MpsState state = MpsState::from_occupations(spread_occupations(L, particles),
                                                opts.chi_max, opts.svd_eps);
    state.canonicalize(1);

    // renv[i] covers sites i+2..L (0-based site i holds the env to its right)
    std::vector<Env> renv(static_cast<size_t>(L));
    renv[static_cast<size_t>(L - 1)] = Env(1);
    renv[static_cast<size_t>(L - 1)][0] = MatrixXcd::Ones(1, 1);
    for (int i = L - 1; i >= 1; --i)
        renv[static_cast<size_t>(i - 1)] = contract_right(renv[static_cast<size_t>(i)],
                                                          state.tensors()[static_cast<size_t>(i)],
                                                          mpo[static_cast<size_t>(i)]);

    std::vector<Env> lenv(static_cast<size_t>(L));
    lenv[0] = Env(1);
    lenv[0][0] = MatrixXcd::Ones(1, 1);

    std::mt19937_64 rng(opts.seed);
    std::normal_distribution<double> gauss(0.0, 1.0);

    double prev_energy = std::numeric_limits<double>::infinity();
    double energy = 0.0;
    std::ostringstream trajectory;
    int sweep = 0;
    bool converged = false;

    for (; sweep < opts.max_sweeps; ++sweep) {
        const double noise = sweep < 3 ? 1e-3 * std::pow(0.1, sweep) : 0.0;
        energy = std::numeric_limits<double>::infinity();

        const auto update_bond = [&](int i, SweepDir dir) { // 0-based left site of the pair
            state.canonicalize(i + 1);
            const auto& a = state.tensors()[static_cast<size_t>(i)];
            const auto& b = state.tensors()[static_cast<size_t>(i + 1)];
            Theta th;
            for (int s1 = 0; s1 < 2; ++s1)
                for (int s2 = 0; s2 < 2; ++s2)
                    th[static_cast<size_t>(2 * s1 + s2)] =
                        a[static_cast<size_t>(s1)] * b[static_cast<size_t>(s2)];
            const double e =
                lanczos_lowest(lenv[static_cast<size_t>(i)], renv[static_cast<size_t>(i + 1)],
                               mpo[static_cast<size_t>(i)], mpo[static_cast<size_t>(i + 1)], th, 30);
            energy = std::min(energy, e);
            if (noise > 0.0) {
                for (auto& m : th)
                    for (Eigen::Index k = 0; k < m.size(); ++k)
                        m.data()[k] += noise * Complex(gauss(rng), gauss(rng));
                const double n = theta_norm(th);
                for (auto& m : th) m /= n;
            }
            const auto dl = th[0].rows(), dr = th[0].cols();
            MatrixXcd m(2 * dl, 2 * dr);
            for (int s1 = 0; s1 < 2; ++s1)
                for (int s2 = 0; s2 < 2; ++s2)
                    m.block(s1 * dl, s2 * dr, dl, dr) = th[static_cast<size_t>(2 * s1 + s2)];
            state.set_two_site(i + 1, m, dir);
            if (dir == SweepDir::Right)
                lenv[static_cast<size_t>(i + 1)] =
                    contract_left(lenv[static_cast<size_t>(i)],
                                  state.tensors()[static_cast<size_t>(i)], mpo[static_cast<size_t>(i)]);
            else
                renv[static_cast<size_t>(i)] =
                    contract_right(renv[static_cast<size_t>(i + 1)],
                                   state.tensors()[static_cast<size_t>(i + 1)],
                                   mpo[static_cast<size_t>(i + 1)]);
        };

        for (int i = 0; i + 1 < L; ++i) update_bond(i, SweepDir::Right);
        for (int i = L - 2; i >= 0; --i) update_bond(i, SweepDir::Left);

        trajectory << "sweep " << sweep << ": E = " << energy << "\n";
        if (std::abs(energy - prev_energy) < opts.tol && noise == 0.0) {
            converged = true;
            ++sweep;
            break;
        }
        prev_energy = energy;
    }

    if (!converged)
        throw ConvergenceError("ground_state_search: no convergence after " +
                               std::to_string(opts.max_sweeps) + " sweeps\n" + trajectory.str());

    const double n_meas = state.total_particles();
    if (std::abs(n_meas - particles) > 1e-8)
        throw ConvergenceError("ground_state_search: <N> = " + std::to_string(n_meas) +
                               " missed target " + std::to_string(particles) +
                               " beyond 1e-8; raise the penalty\n" + trajectory.str());

    DmrgResult res;
    res.energy = mpo_expectation(state, plain);
    res.state = std::move(state);
    res.sweeps = sweep;
    return res;
}

} // namespace hcb
