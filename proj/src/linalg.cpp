#include "hcb/linalg.hpp"

#include <lapacke.h>

#include <algorithm>
#include <stdexcept>
#include <vector>

namespace hcb {

SvdResult svd_econ(const MatrixXcd& a) {
    const lapack_int m = static_cast<lapack_int>(a.rows());
    const lapack_int n = static_cast<lapack_int>(a.cols());
    const lapack_int r = std::min(m, n);

    SvdResult out;
    out.u.resize(m, r);
    out.s.resize(r);
    out.vh.resize(r, n);
    if (r == 0) return out;

    MatrixXcd work = a; // zgesdd destroys its input
    lapack_int info = LAPACKE_zgesdd(
        LAPACK_COL_MAJOR, 'S', m, n,
        reinterpret_cast<lapack_complex_double*>(work.data()), m,
        out.s.data(),
        reinterpret_cast<lapack_complex_double*>(out.u.data()), m,
        reinterpret_cast<lapack_complex_double*>(out.vh.data()), r);
    if (info != 0) {
        // zgesdd occasionally fails to converge; zgesvd is slower but sturdier.
        work = a;
        std::vector<double> superb(static_cast<size_t>(std::max<lapack_int>(1, r - 1)));
        info = LAPACKE_zgesvd(
            LAPACK_COL_MAJOR, 'S', 'S', m, n,
            reinterpret_cast<lapack_complex_double*>(work.data()), m,
            out.s.data(),
            reinterpret_cast<lapack_complex_double*>(out.u.data()), m,
            reinterpret_cast<lapack_complex_double*>(out.vh.data()), r,
            superb.data());
        if (info != 0)
            throw std::runtime_error("svd_econ: LAPACK zgesvd failed, info=" + std::to_string(info));
    }
    return out;
}

MatrixXcd expm_hermitian(const MatrixXcd& herm, double t) {
    Eigen::SelfAdjointEigenSolver<MatrixXcd> es(herm);
    if (es.info() != Eigen::Success)
        throw std::runtime_error("expm_hermitian: eigendecomposition failed");
    const VectorXd& w = es.eigenvalues();
    VectorXcd phases(w.size());
    for (Eigen::Index k = 0; k < w.size(); ++k)
        phases[k] = std::exp(Complex(0.0, -w[k] * t));
    return es.eigenvectors() * phases.asDiagonal() * es.eigenvectors().adjoint();
}

} // namespace hcb
