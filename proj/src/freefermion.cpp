#include "hcb/freefermion.hpp"

#include "hcb/errors.hpp"

#include <Eigen/Eigenvalues>

#include <cmath>
#include <string>

namespace hcb {

namespace {

void require_free(const ModelParams& params, const char* op) {
    if (params.three_body != 0.0)
        throw UsageError(std::string(op) + ": the correlation-matrix engine is exact only at W=0 "
                         "(got W=" + std::to_string(params.three_body) + ")");
}

} // namespace

CorrelationMatrix correlation_from_occupations(const std::vector<int>& occ) {
    const int L = static_cast<int>(occ.size());
    CorrelationMatrix cm;
    cm.C = MatrixXcd::Zero(L, L);
    for (int i = 0; i < L; ++i) {
        if (occ[static_cast<size_t>(i)] != 0 && occ[static_cast<size_t>(i)] != 1)
            throw UsageError("correlation_from_occupations: occupations must be 0 or 1");
        cm.C(i, i) = occ[static_cast<size_t>(i)];
    }
    return cm;
}

CorrelationMatrix ground_state_correlation(const ModelParams& params, int particles) {
    require_free(params, "ground_state_correlation");
    const int L = params.sites;
    if (particles < 0 || particles > L)
        throw UsageError("ground_state_correlation: need 0 <= N <= L");
    Eigen::SelfAdjointEigenSolver<MatrixXd> es(single_particle_matrix(params));
    const MatrixXd phi = es.eigenvectors().leftCols(particles);
    CorrelationMatrix cm;
    cm.C = (phi * phi.transpose()).cast<Complex>();
    return cm;
}

CorrelationMatrix evolve_correlation(const CorrelationMatrix& c0, const ModelParams& params,
                                     double t) {
    require_free(params, "evolve_correlation");
    if (c0.sites() != params.sites)
        throw UsageError("evolve_correlation: size mismatch");
    Eigen::SelfAdjointEigenSolver<MatrixXd> es(single_particle_matrix(params));
    const MatrixXd& q = es.eigenvectors();
    VectorXcd phases(params.sites);
    for (int k = 0; k < params.sites; ++k)
        phases[k] = std::exp(Complex(0.0, es.eigenvalues()[k] * t));
    const MatrixXcd u = q.cast<Complex>() * phases.asDiagonal() * q.transpose().cast<Complex>();
    CorrelationMatrix out;
    out.C = u * c0.C * u.adjoint();
    return out;
}

std::vector<double> density_from_correlation(const CorrelationMatrix& c) {
    const int L = c.sites();
    std::vector<double> n(static_cast<size_t>(L));
    for (int i = 0; i < L; ++i) {
        const double v = c.C(i, i).real();
        if (v < -1e-10 || v > 1.0 + 1e-10)
            throw IntegrityError("density_from_correlation: C_" + std::to_string(i + 1) +
                                 std::to_string(i + 1) + " = " + std::to_string(v) +
                                 " outside [0,1] tolerance band");
        n[static_cast<size_t>(i)] = std::min(1.0, std::max(0.0, v));
    }
    return n;
}

double half_current_from_correlation(const CorrelationMatrix& c, double J) {
    const int L = c.sites();
    double total = 0.0;
    for (int i = L / 2 + 1; i + 1 <= L; ++i) // 1-based bonds (i, i+1)
        total += 2.0 * J * c.C(i - 1, i).imag();
    return total;
}

} // namespace hcb
