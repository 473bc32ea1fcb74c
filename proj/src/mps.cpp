#include "hcb/mps.hpp"

#include "hcb/errors.hpp"

#include <Eigen/QR>

#include <algorithm>
#include <cmath>
#include <string>

namespace hcb {

namespace {

// Folds: two-block vertical stack [A0; A1] for the bond on the right of a
// site, horizontal concat [A0, A1] for the bond on its left. Gate and phase
// indices follow the (n_left before n_right, 0 before 1) ordering everywhere.

MatrixXcd fold_left(const MpsState::SiteTensor& t) {
    const auto dl = t[0].rows(), dr = t[0].cols();
    MatrixXcd m(2 * dl, dr);
    m.topRows(dl) = t[0];
    m.bottomRows(dl) = t[1];
    return m;
}

MatrixXcd fold_right(const MpsState::SiteTensor& t) {
    const auto dl = t[0].rows(), dr = t[0].cols();
    MatrixXcd m(dl, 2 * dr);
    m.leftCols(dr) = t[0];
    m.rightCols(dr) = t[1];
    return m;
}

} // namespace

MpsState MpsState::from_occupations(const std::vector<int>& occ, int chi_max, double svd_eps) {
    MpsState st;
    st.chi_max_ = chi_max;
    st.svd_eps_ = svd_eps;
    st.center_ = 1;
    st.tensors_.reserve(occ.size());
    for (int o : occ) {
        if (o != 0 && o != 1)
            throw UsageError("MpsState::from_occupations: occupations must be 0 or 1");
        SiteTensor t;
        t[0] = MatrixXcd::Zero(1, 1);
        t[1] = MatrixXcd::Zero(1, 1);
        t[static_cast<size_t>(o)](0, 0) = 1.0;
        st.tensors_.push_back(std::move(t));
    }
    if (st.tensors_.empty()) throw UsageError("MpsState::from_occupations: empty chain");
    return st;
}

MpsState MpsState::from_raw(std::vector<SiteTensor> tensors, int center, int chi_max,
                            double svd_eps, double discarded_weight) {
    MpsState st;
    st.tensors_ = std::move(tensors);
    st.center_ = center;
    st.chi_max_ = chi_max;
    st.svd_eps_ = svd_eps;
    st.discarded_ = discarded_weight;
    return st;
}

std::vector<int> MpsState::bond_dims() const {
    std::vector<int> dims;
    dims.reserve(tensors_.size() + 1);
    dims.push_back(1);
    for (const auto& t : tensors_) dims.push_back(static_cast<int>(t[0].cols()));
    return dims;
}

int MpsState::max_bond_dim() const {
    int m = 1;
    for (const auto& t : tensors_) m = std::max(m, static_cast<int>(t[0].cols()));
    return m;
}

double MpsState::norm() const {
    const auto& t = tensors_[static_cast<size_t>(center_ - 1)];
    return std::sqrt(t[0].squaredNorm() + t[1].squaredNorm());
}

void MpsState::move_center_right() {
    auto& a = tensors_[static_cast<size_t>(center_ - 1)];
    const auto dl = a[0].rows(), dr = a[0].cols();
    const auto k = std::min(2 * dl, dr);
    Eigen::HouseholderQR<MatrixXcd> qr(fold_left(a));
    MatrixXcd q = qr.householderQ() * MatrixXcd::Identity(2 * dl, k);
    MatrixXcd r = qr.matrixQR().topRows(k).triangularView<Eigen::Upper>();
    a[0] = q.topRows(dl);
    a[1] = q.bottomRows(dl);
    auto& b = tensors_[static_cast<size_t>(center_)];
    b[0] = r * b[0];
    b[1] = r * b[1];
    ++center_;
}

void MpsState::move_center_left() {
    auto& a = tensors_[static_cast<size_t>(center_ - 1)];
    const auto dl = a[0].rows(), dr = a[0].cols();
    const auto k = std::min(dl, 2 * dr);
    Eigen::HouseholderQR<MatrixXcd> qr(fold_right(a).adjoint());
    MatrixXcd q = (qr.householderQ() * MatrixXcd::Identity(2 * dr, k)).adjoint();
    MatrixXcd l = MatrixXcd(qr.matrixQR().topRows(k).triangularView<Eigen::Upper>()).adjoint();
    a[0] = q.leftCols(dr);
    a[1] = q.rightCols(dr);
    auto& b = tensors_[static_cast<size_t>(center_ - 2)];
    b[0] = b[0] * l;
    b[1] = b[1] * l;
    --center_;
}

void MpsState::canonicalize(int new_center) {
    if (new_center < 1 || new_center > sites())
        throw UsageError("canonicalize: center " + std::to_string(new_center) + " out of range");
    while (center_ < new_center) move_center_right();
    while (center_ > new_center) move_center_left();
}

int MpsState::truncated_svd(const MatrixXcd& m, MatrixXcd& u, VectorXd& s, MatrixXcd& vh) {
    SvdResult svd = svd_econ(m);
    const auto r = svd.s.size();
    const double total = svd.s.squaredNorm();
    const double cutoff = svd_eps_ * (r > 0 ? svd.s[0] : 0.0);
    int k = 0;
    while (k < r && svd.s[k] >= cutoff && k < chi_max_) ++k;
    k = std::max(k, 1);
    double kept = 0.0;
    for (int i = 0; i < k; ++i) kept += svd.s[i] * svd.s[i];
    if (total > 0.0) discarded_ += (total - kept) / total;
    u = svd.u.leftCols(k);
    s = svd.s.head(k);
    if (kept > 0.0) s *= 1.0 / std::sqrt(kept); // restore unit norm after the cut
    vh = svd.vh.topRows(k);
    return k;
}

void MpsState::apply_two_site_gate(int bond, const TwoSiteGate& gate, SweepDir dir) {
    if (bond < 1 || bond + 1 > sites())
        throw UsageError("apply_two_site_gate: bond out of range");
    if (center_ != bond && center_ != bond + 1)
        throw UsageError("apply_two_site_gate: center must sit on the bond");
    const auto& a = tensors_[static_cast<size_t>(bond - 1)];
    const auto& b = tensors_[static_cast<size_t>(bond)];
    const auto dl = a[0].rows(), dm = a[0].cols(), dr = b[0].cols();

    std::array<MatrixXcd, 4> th;
    for (int s1 = 0; s1 < 2; ++s1)
        for (int s2 = 0; s2 < 2; ++s2)
            th[static_cast<size_t>(2 * s1 + s2)] = a[static_cast<size_t>(s1)] * b[static_cast<size_t>(s2)];

    std::array<MatrixXcd, 4> tg;
    for (int p = 0; p < 4; ++p) {
        tg[static_cast<size_t>(p)] = MatrixXcd::Zero(dl, dr);
        for (int q = 0; q < 4; ++q) {
            const Complex g = gate.matrix(p, q);
            if (g != Complex(0.0, 0.0)) tg[static_cast<size_t>(p)] += g * th[static_cast<size_t>(q)];
        }
    }

    MatrixXcd m(2 * dl, 2 * dr);
    for (int s1 = 0; s1 < 2; ++s1)
        for (int s2 = 0; s2 < 2; ++s2)
            m.block(s1 * dl, s2 * dr, dl, dr) = tg[static_cast<size_t>(2 * s1 + s2)];

    set_two_site(bond, m, dir);
    (void)dm;
}

void MpsState::set_two_site(int bond, const MatrixXcd& folded_theta, SweepDir dir) {
    if (bond < 1 || bond + 1 > sites())
        throw UsageError("set_two_site: bond out of range");
    auto& na = tensors_[static_cast<size_t>(bond - 1)];
    auto& nb = tensors_[static_cast<size_t>(bond)];
    const auto dl = folded_theta.rows() / 2, dr = folded_theta.cols() / 2;

    MatrixXcd u, vh;
    VectorXd s;
    truncated_svd(folded_theta, u, s, vh);
    if (dir == SweepDir::Right) {
        na[0] = u.topRows(dl);
        na[1] = u.bottomRows(dl);
        MatrixXcd sv = s.asDiagonal() * vh;
        nb[0] = sv.leftCols(dr);
        nb[1] = sv.rightCols(dr);
        center_ = bond + 1;
    } else {
        MatrixXcd us = u * s.asDiagonal();
        na[0] = us.topRows(dl);
        na[1] = us.bottomRows(dl);
        nb[0] = vh.leftCols(dr);
        nb[1] = vh.rightCols(dr);
        center_ = bond;
    }
}

void MpsState::apply_three_site_diagonal(int left_site, const ThreeSitePhases& phases,
                                         SweepDir dir) {
    const int j = left_site;
    if (j < 1 || j + 2 > sites())
        throw UsageError("apply_three_site_diagonal: sites out of range");
    if (center_ < j || center_ > j + 2)
        throw UsageError("apply_three_site_diagonal: center must sit on the triple");
    const auto& a = tensors_[static_cast<size_t>(j - 1)];
    const auto& b = tensors_[static_cast<size_t>(j)];
    const auto& c = tensors_[static_cast<size_t>(j + 1)];
    const auto dl = a[0].rows(), dr = c[0].cols();

    std::array<MatrixXcd, 8> th;
    for (int s1 = 0; s1 < 2; ++s1) {
        const std::array<MatrixXcd, 2> ab = {a[static_cast<size_t>(s1)] * b[0],
                                             a[static_cast<size_t>(s1)] * b[1]};
        for (int s2 = 0; s2 < 2; ++s2)
            for (int s3 = 0; s3 < 2; ++s3)
                th[static_cast<size_t>(4 * s1 + 2 * s2 + s3)] =
                    phases.phases[static_cast<size_t>(4 * s1 + 2 * s2 + s3)] *
                    (ab[static_cast<size_t>(s2)] * c[static_cast<size_t>(s3)]);
    }

    MatrixXcd u1, vh1, u2, vh2;
    VectorXd s1v, s2v;
    auto& na = tensors_[static_cast<size_t>(j - 1)];
    auto& nb = tensors_[static_cast<size_t>(j)];
    auto& nc = tensors_[static_cast<size_t>(j + 1)];

    if (dir == SweepDir::Right) {
        // split (l,s1 | s2,s3,r), then (k1,s2 | s3,r)
        MatrixXcd m1(2 * dl, 4 * dr);
        for (int s1 = 0; s1 < 2; ++s1)
            for (int s2 = 0; s2 < 2; ++s2)
                for (int s3 = 0; s3 < 2; ++s3)
                    m1.block(s1 * dl, (2 * s2 + s3) * dr, dl, dr) =
                        th[static_cast<size_t>(4 * s1 + 2 * s2 + s3)];
        const int k1 = truncated_svd(m1, u1, s1v, vh1);
        na[0] = u1.topRows(dl);
        na[1] = u1.bottomRows(dl);
        MatrixXcd rest = s1v.asDiagonal() * vh1; // k1 x 4dr
        MatrixXcd m2(2 * k1, 2 * dr);
        for (int s2 = 0; s2 < 2; ++s2)
            for (int s3 = 0; s3 < 2; ++s3)
                m2.block(s2 * k1, s3 * dr, k1, dr) = rest.block(0, (2 * s2 + s3) * dr, k1, dr);
        const int k2 = truncated_svd(m2, u2, s2v, vh2);
        nb[0] = u2.topRows(k1);
        nb[1] = u2.bottomRows(k1);
        MatrixXcd sv = s2v.asDiagonal() * vh2;
        nc[0] = sv.leftCols(dr);
        nc[1] = sv.rightCols(dr);
        center_ = j + 2;
        (void)k2;
    } else {
        // split (l,s1,s2 | s3,r), then (l,s1 | s2,k1)
        MatrixXcd m1(4 * dl, 2 * dr);
        for (int s1 = 0; s1 < 2; ++s1)
            for (int s2 = 0; s2 < 2; ++s2)
                for (int s3 = 0; s3 < 2; ++s3)
                    m1.block((2 * s1 + s2) * dl, s3 * dr, dl, dr) =
                        th[static_cast<size_t>(4 * s1 + 2 * s2 + s3)];
        const int k1 = truncated_svd(m1, u1, s1v, vh1);
        nc[0] = vh1.leftCols(dr);
        nc[1] = vh1.rightCols(dr);
        MatrixXcd rest = u1 * s1v.asDiagonal(); // 4dl x k1
        MatrixXcd m2(2 * dl, 2 * k1);
        for (int s1 = 0; s1 < 2; ++s1)
            for (int s2 = 0; s2 < 2; ++s2)
                m2.block(s1 * dl, s2 * k1, dl, k1) = rest.block((2 * s1 + s2) * dl, 0, dl, k1);
        const int k2 = truncated_svd(m2, u2, s2v, vh2);
        MatrixXcd us = u2 * s2v.asDiagonal();
        na[0] = us.topRows(dl);
        na[1] = us.bottomRows(dl);
        nb[0] = vh2.leftCols(k1);
        nb[1] = vh2.rightCols(k1);
        center_ = j;
        (void)k2;
    }
}

double MpsState::apply_pair_creation(int site) {
    if (site < 1 || site + 1 > sites())
        throw UsageError("apply_pair_creation: site out of range");
    canonicalize(site);
    auto& a = tensors_[static_cast<size_t>(site - 1)];
    auto& b = tensors_[static_cast<size_t>(site)];
    const auto dl = a[0].rows(), dr = b[0].cols();

    // b^dag on both sites: |1><0| locally, occupied components annihilate
    const MatrixXcd th11 = a[0] * b[0];
    const double weight = th11.squaredNorm();
    if (weight < 1e-14)
        throw UsageError("apply_pair_creation: zero norm, quench impossible from this state");

    MatrixXcd m = MatrixXcd::Zero(2 * dl, 2 * dr);
    m.block(dl, dr, dl, dr) = th11 / std::sqrt(weight); // only the |11> block survives
    MatrixXcd u, vh;
    VectorXd s;
    truncated_svd(m, u, s, vh);
    MatrixXcd us = u * s.asDiagonal();
    a[0] = us.topRows(dl);
    a[1] = us.bottomRows(dl);
    b[0] = vh.leftCols(dr);
    b[1] = vh.rightCols(dr);
    // center stays at `site`
    return weight;
}

double MpsState::bond_entropy(int bond) {
    if (bond < 1 || bond + 1 > sites())
        throw UsageError("bond_entropy: bond out of range");
    if (center_ < bond) canonicalize(bond);
    if (center_ > bond + 1) canonicalize(bond + 1);
    const auto& t = tensors_[static_cast<size_t>(center_ - 1)];
    const MatrixXcd m = (center_ == bond) ? fold_left(t) : fold_right(t);
    SvdResult svd = svd_econ(m);
    const double total = svd.s.squaredNorm();
    if (total <= 0.0) return 0.0;
    double ent = 0.0;
    for (Eigen::Index i = 0; i < svd.s.size(); ++i) {
        const double p = svd.s[i] * svd.s[i] / total;
        if (p > 1e-16) ent -= p * std::log(p);
    }
    return ent;
}

double MpsState::max_bond_entropy() {
    double best = 0.0;
    canonicalize(1);
    for (int b = 1; b + 1 <= sites(); ++b) {
        canonicalize(b);
        best = std::max(best, bond_entropy(b));
    }
    return best;
}

std::vector<double> MpsState::density() {
    std::vector<double> n(static_cast<size_t>(sites()));
    canonicalize(1);
    for (int i = 1; i <= sites(); ++i) {
        canonicalize(i);
        const auto& t = tensors_[static_cast<size_t>(i - 1)];
        const double n0 = t[0].squaredNorm(), n1 = t[1].squaredNorm();
        n[static_cast<size_t>(i - 1)] = n1 / (n0 + n1);
    }
    return n;
}

double MpsState::half_current(double J) {
    const int L = sites();
    double total = 0.0;
    for (int i = L / 2 + 1; i + 1 <= L; ++i) {
        canonicalize(i);
        const auto& a = tensors_[static_cast<size_t>(i - 1)];
        const auto& b = tensors_[static_cast<size_t>(i)];
        const MatrixXcd th01 = a[0] * b[1];
        const MatrixXcd th10 = a[1] * b[0];
        const Complex g = (th01.conjugate().cwiseProduct(th10)).sum();
        const double nrm = norm();
        total += -2.0 * J * g.imag() / (nrm * nrm);
    }
    return total;
}

double MpsState::total_particles() {
    const auto n = density();
    double total = 0.0;
    for (double x : n) total += x;
    return total;
}

Complex overlap(const MpsState& a, const MpsState& b) {
    if (a.sites() != b.sites()) throw UsageError("overlap: size mismatch");
    MatrixXcd t = MatrixXcd::Ones(1, 1);
    for (int i = 0; i < a.sites(); ++i) {
        const auto& ta = a.tensors()[static_cast<size_t>(i)];
        const auto& tb = b.tensors()[static_cast<size_t>(i)];
        MatrixXcd next = ta[0].adjoint() * t * tb[0];
        next += ta[1].adjoint() * t * tb[1];
        t = std::move(next);
    }
    return t(0, 0);
}

void tebd_step(MpsState& state, const ModelParams& params, const TebdSchedule& schedule) {
    if (schedule.dt == 0.0) return;
    const int L = state.sites();
    const TwoSiteGate half = hopping_gate(params, schedule.dt / 2);
    const ThreeSitePhases phases = interaction_phases(params, schedule.dt);

    const auto odd_up = [&] {
        for (int i = 1; i + 1 <= L; i += 2) {
            state.canonicalize(i);
            state.apply_two_site_gate(i, half, SweepDir::Right);
        }
    };
    const auto even_down = [&] {
        for (int i = (L % 2 == 0) ? L - 2 : L - 1; i >= 2; i -= 2) {
            state.canonicalize(i + 1);
            state.apply_two_site_gate(i, half, SweepDir::Left);
        }
    };
    const auto interaction_up = [&] {
        for (int j = 1; j + 2 <= L; ++j) {
            if (state.center() < j) state.canonicalize(j);
            if (state.center() > j + 2) state.canonicalize(j + 2);
            state.apply_three_site_diagonal(j, phases, SweepDir::Right);
        }
    };

    odd_up();
    even_down();
    if (params.three_body != 0.0) interaction_up();
    even_down();
    odd_up();
}

} // namespace hcb
