#pragma once

#include "hcb/fock_basis.hpp"
#include "hcb/linalg.hpp"

#include <array>

namespace hcb {

// H = -J sum_i (b^dag_i b_{i+1} + h.c.) + W sum_i n_{i-1} n_i n_{i+1}
// on an open chain of hard-core bosons (strict two-level local space).
struct ModelParams {
    double hop = 1.0;       // J, the unit of energy
    double three_body = 0.0; // W
    int sites = 0;          // L

    ModelParams(double J, double W, int L);
};

// Two-site gate basis ordering is (n_left, n_right) lexicographic, 0 before 1:
// index = 2*n_left + n_right, i.e. {00, 01, 10, 11}. All engines share this.
struct TwoSiteGate {
    Eigen::Matrix4cd matrix;
    double dt = 0.0;
};

// Diagonal phases indexed by (n_{i-1}, n_i, n_{i+1}): index = 4*nl + 2*nm + 1*nr.
struct ThreeSitePhases {
    std::array<Complex, 8> phases;
    double dt = 0.0;
};

// exp(-i dt h_bond), h_bond = -J (b^dag_i b_{i+1} + h.c.); identity on {00,11},
// a rotation mixing {01,10}.
TwoSiteGate hopping_gate(const ModelParams& params, double dt);

// Only the (1,1,1) entry differs from 1; it equals exp(-i W dt).
ThreeSitePhases interaction_phases(const ModelParams& params, double dt);

// Dense Hermitian matrix of H over a fixed-N basis. Small systems only
// (the basis cap applies; dense storage limits practical use to L ~ 20).
MatrixXcd dense_hamiltonian(const ModelParams& params, const FockBasis& basis);

// Tridiagonal single-particle matrix for W=0: zero diagonal, -J off-diagonal.
// Eigenvalues are eps_k = -2J cos(k), k = l*pi/(L+1), l = 1..L.
MatrixXd single_particle_matrix(const ModelParams& params);

} // namespace hcb
