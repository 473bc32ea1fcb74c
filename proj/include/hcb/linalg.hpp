#pragma once

#include <Eigen/Dense>
#include <complex>

namespace hcb {

using Complex = std::complex<double>;
using MatrixXcd = Eigen::MatrixXcd;
using MatrixXd = Eigen::MatrixXd;
using VectorXcd = Eigen::VectorXcd;
using VectorXd = Eigen::VectorXd;

struct SvdResult {
    MatrixXcd u;        // m x r
    VectorXd s;         // r, descending
    MatrixXcd vh;       // r x n  (V^dagger)
};

// Economy-size SVD via LAPACK zgesdd (divide and conquer), zgesvd fallback.
SvdResult svd_econ(const MatrixXcd& a);

// exp(-i * herm * t) for a Hermitian matrix, via eigendecomposition.
MatrixXcd expm_hermitian(const MatrixXcd& herm, double t);

} // namespace hcb
