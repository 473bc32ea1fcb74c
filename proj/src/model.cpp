#include "hcb/model.hpp"

#include "hcb/errors.hpp"

#include <bit>
#include <cmath>
#include <string>

namespace hcb {

ModelParams::ModelParams(double J, double W, int L) : hop(J), three_body(W), sites(L) {
    if (!(J > 0.0))
        throw UsageError("ModelParams: J must be > 0");
    if (!(W >= 0.0))
        throw UsageError("ModelParams: W must be >= 0");
    if (L < 3)
        throw UsageError("ModelParams: the three-site term needs L >= 3, got L=" + std::to_string(L));
}

TwoSiteGate hopping_gate(const ModelParams& params, double dt) {
    if (!std::isfinite(dt))
        throw UsageError("hopping_gate: dt must be finite");
    // h restricted to span{|01>,|10>} is -J sigma_x, so
    // exp(-i dt h) = cos(J dt) I + i sin(J dt) sigma_x there.
    const double c = std::cos(params.hop * dt);
    const double s = std::sin(params.hop * dt);
    TwoSiteGate g;
    g.dt = dt;
    g.matrix.setIdentity();
    g.matrix(1, 1) = c;
    g.matrix(2, 2) = c;
    g.matrix(1, 2) = Complex(0.0, s);
    g.matrix(2, 1) = Complex(0.0, s);
    return g;
}

ThreeSitePhases interaction_phases(const ModelParams& params, double dt) {
    if (!std::isfinite(dt))
        throw UsageError("interaction_phases: dt must be finite");
    ThreeSitePhases p;
    p.dt = dt;
    p.phases.fill(Complex(1.0, 0.0));
    p.phases[7] = std::exp(Complex(0.0, -params.three_body * dt));
    return p;
}

MatrixXcd dense_hamiltonian(const ModelParams& params, const FockBasis& basis) {
    const std::int64_t dim = basis.dim();
    // dense storage: dim^2 complex doubles; keep the oracle honest about size
    if (dim > 4000)
        throw CapacityError("dense_hamiltonian: dim=" + std::to_string(dim) +
                            " too large for dense storage (L=" + std::to_string(basis.sites()) +
                            ", N=" + std::to_string(basis.particles()) + ")");
    MatrixXcd h = MatrixXcd::Zero(dim, dim);
    const int L = basis.sites();
    for (std::int64_t a = 0; a < dim; ++a) {
        const std::uint64_t s = basis.state(a);
        const int triples = std::popcount(s & (s >> 1) & (s >> 2));
        h(a, a) = params.three_body * triples;
        for (int p = 0; p + 1 < L; ++p) {
            const std::uint64_t pair = 3ULL << p;
            const std::uint64_t occ = s & pair;
            if (occ != 0 && occ != pair) {
                const std::int64_t b = basis.index_of(s ^ pair);
                h(b, a) += -params.hop;
            }
        }
    }
    return h;
}

MatrixXd single_particle_matrix(const ModelParams& params) {
    const int L = params.sites;
    MatrixXd h = MatrixXd::Zero(L, L);
    for (int i = 0; i + 1 < L; ++i) {
        h(i, i + 1) = -params.hop;
        h(i + 1, i) = -params.hop;
    }
    return h;
}

} // namespace hcb
