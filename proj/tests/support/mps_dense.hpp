#pragma once

// Test-only bridges between MPS and full 2^L state vectors (L <= ~14).
// Hilbert index convention matches FockBasis: site i occupies bit i-1.

#include "hcb/fock.hpp"
#include "hcb/mps.hpp"

#include <random>

namespace hcb::test {

inline VectorXcd mps_to_dense(const MpsState& st) {
    const int L = st.sites();
    MatrixXcd m = MatrixXcd::Ones(1, 1); // rows: partial Hilbert index, cols: bond
    for (int i = 0; i < L; ++i) {
        const auto& t = st.tensors()[static_cast<size_t>(i)];
        const auto rows = m.rows();
        const auto dr = t[0].cols();
        MatrixXcd next(2 * rows, dr);
        next.topRows(rows) = m * t[0];    // occupation 0: bit i stays clear
        next.bottomRows(rows) = m * t[1]; // occupation 1: bit i set
        m = std::move(next);
    }
    // row index layout: bit i of the row is occupation of site i+1 with site 1
    // varying SLOWEST after the stacking above; re-index so site 1 = bit 0
    VectorXcd out(m.rows());
    const auto n = m.rows();
    for (Eigen::Index h = 0; h < n; ++h) {
        // the stacked index grew as h_stack = occ_L * 2^(L-1) + ... + occ_1 * 2^0
        // after L stackings (last stacking is the high bit); occ_i sits at bit i-1
        out[h] = m(h, 0);
    }
    return out;
}

inline MpsState mps_from_dense(const VectorXcd& amps, int L, int chi_max = 1024,
                               double svd_eps = 0.0) {
    std::vector<MpsState::SiteTensor> tensors(static_cast<size_t>(L));
    // work matrix: rows = left bond, cols = remaining Hilbert index
    // (remaining index: bit j = occupation of site i+j+1, lowest bit first)
    MatrixXcd work(1, amps.size());
    for (Eigen::Index h = 0; h < amps.size(); ++h) work(0, h) = amps[h];
    for (int i = 0; i < L; ++i) {
        const auto d = work.rows();
        const auto rest = work.cols() / 2;
        // fold physical index of this site into rows: row = s*d + l
        MatrixXcd m(2 * d, rest);
        for (Eigen::Index l = 0; l < d; ++l)
            for (Eigen::Index r = 0; r < rest; ++r)
                for (int s = 0; s < 2; ++s)
                    m(s * d + l, r) = work(l, 2 * r + s);
        if (i == L - 1) {
            tensors[static_cast<size_t>(i)][0] = m.topRows(d);
            tensors[static_cast<size_t>(i)][1] = m.bottomRows(d);
            break;
        }
        SvdResult svd = svd_econ(m);
        int k = 0;
        const double cutoff = svd_eps * (svd.s.size() ? svd.s[0] : 0.0);
        while (k < svd.s.size() && k < chi_max && svd.s[k] > std::max(cutoff, 1e-14)) ++k;
        k = std::max(k, 1);
        tensors[static_cast<size_t>(i)][0] = svd.u.leftCols(k).topRows(d);
        tensors[static_cast<size_t>(i)][1] = svd.u.leftCols(k).bottomRows(d);
        work = svd.s.head(k).asDiagonal() * svd.vh.topRows(k);
    }
    return MpsState::from_raw(std::move(tensors), L, chi_max,
                              svd_eps > 0 ? svd_eps : 1e-8, 0.0);
}

// Seeded random MPS with bond dimension <= chi via a random dense vector.
inline MpsState random_mps(int L, int chi, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> g(0.0, 1.0);
    VectorXcd v(1 << L);
    for (Eigen::Index i = 0; i < v.size(); ++i) v[i] = Complex(g(rng), g(rng));
    v.normalize();
    return mps_from_dense(v, L, chi);
}

// Fixed-N dense amplitudes (FockBasis ordering) from a full 2^L vector.
inline VectorXcd project_to_sector(const VectorXcd& full, const FockBasis& basis) {
    VectorXcd out(basis.dim());
    for (std::int64_t a = 0; a < basis.dim(); ++a)
        out[a] = full[static_cast<Eigen::Index>(basis.state(a))];
    return out;
}

} // namespace hcb::test
