#pragma once

#include "hcb/fock_basis.hpp"
#include "hcb/fock_kernels.hpp"
#include "hcb/linalg.hpp"
#include "hcb/model.hpp"

#include <optional>
#include <vector>

namespace hcb {

// Full-Hilbert-space oracle state. The basis must outlive the vector.
struct FockVector {
    const FockBasis* basis = nullptr;
    VectorXcd amps;

    int sites() const { return basis->sites(); }
    double norm() const { return amps.norm(); }
};

// Product state occupied exactly on sites [i1, i2] (1-based, inclusive).
FockVector box_state(const FockBasis& basis, int i1, int i2);

std::vector<double> density(const FockVector& state, int threads = 1);
double half_current(const FockVector& state, double J, int threads = 1);
double energy(const FockVector& state, const ModelParams& params, int threads = 1);
double total_particles(const FockVector& state, int threads = 1);

// Propagator for exp(-i H dt). Small sectors (dim <= 2000) use a cached dense
// eigendecomposition; larger ones use adaptive Lanczos stepping with
// step-halving on residual failure.
class FockEvolver {
public:
    // force_krylov skips the dense shortcut on small sectors (used to pit the
    // Lanczos stepper against the dense route in tests).
    FockEvolver(const FockBasis& basis, const ModelParams& params,
                double tol = 1e-10, int threads = 1, bool force_krylov = false);

    // state <- exp(-i H dt) state, renormalized; 2-norm error <= tol per call.
    void step(FockVector& state, double dt) const;

private:
    void krylov_step(VectorXcd& v, double dt, double tol, int depth) const;

    const FockBasis* basis_;
    ModelParams params_;
    double tol_;
    int threads_;
    bool dense_;
    VectorXd evals_;
    MatrixXcd evecs_;
};

struct GroundStateResult {
    double energy = 0.0;
    FockVector state;
    bool degenerate = false; // gap to the next level < 1e-8
};

GroundStateResult ground_state(const FockBasis& basis, const ModelParams& params,
                               int threads = 1);

struct PairCreationResult {
    FockVector state;  // renormalized, on the (L, N+2) basis
    double weight = 0.0; // squared norm before renormalization
};

// Applies b^dag_site b^dag_{site+1} with hard-core projection and re-embeds the
// result in target_basis (same L, N+2 particles).
PairCreationResult apply_pair_creation(const FockVector& state, int site,
                                       const FockBasis& target_basis);

} // namespace hcb
