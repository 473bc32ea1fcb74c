#pragma once

#include "hcb/linalg.hpp"
#include "hcb/model.hpp"

#include <vector>

namespace hcb {

// Exact W=0 engine at arbitrary L: one-body correlation matrix C_ij = <c^dag_i c_j>
// under the Jordan-Wigner mapping. Only JW-invariant observables are exposed
// (density, nearest-neighbor current); no string correlators.
struct CorrelationMatrix {
    MatrixXcd C;

    int sites() const { return static_cast<int>(C.rows()); }
};

// Diagonal correlation matrix of a product occupation state.
CorrelationMatrix correlation_from_occupations(const std::vector<int>& occ);

// C = Phi Phi^dag over the N lowest single-particle modes; requires W = 0.
CorrelationMatrix ground_state_correlation(const ModelParams& params, int particles);

// C(t) = U C(0) U^dag with U = exp(+i h t) in the site basis. Exact in time;
// requires W = 0. The sign convention is pinned by the outward-expansion and
// fock-exact cross-check regression tests.
CorrelationMatrix evolve_correlation(const CorrelationMatrix& c0, const ModelParams& params,
                                     double t);

std::vector<double> density_from_correlation(const CorrelationMatrix& c);

// sum_{i=L/2+1}^{L-1} 2 J Im(C_{i,i+1})
double half_current_from_correlation(const CorrelationMatrix& c, double J);

} // namespace hcb
