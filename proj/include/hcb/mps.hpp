#pragma once

#include "hcb/linalg.hpp"
#include "hcb/model.hpp"

#include <array>
#include <cstdint>
#include <vector>

namespace hcb {

enum class SweepDir { Left, Right };

// Open-boundary matrix product state with a strict two-level local space.
// Site tensors are stored as one (Dl x Dr) matrix per physical occupation;
// sites left of the canonical center are left-isometric, sites right of it
// right-isometric. All public site/bond indices are 1-based.
class MpsState {
public:
    using SiteTensor = std::array<MatrixXcd, 2>;

    MpsState() = default;

    static MpsState from_occupations(const std::vector<int>& occ,
                                     int chi_max = 400, double svd_eps = 1e-8);

    // Rebuild from raw tensors (checkpoint restore); caller guarantees shapes chain.
    static MpsState from_raw(std::vector<SiteTensor> tensors, int center,
                             int chi_max, double svd_eps, double discarded_weight);

    int sites() const { return static_cast<int>(tensors_.size()); }
    int center() const { return center_; }
    int chi_max() const { return chi_max_; }
    double svd_eps() const { return svd_eps_; }
    double discarded_weight() const { return discarded_; }
    void reset_discarded_weight() { discarded_ = 0.0; }
    std::vector<int> bond_dims() const; // length L+1, ends pinned to 1
    int max_bond_dim() const;
    const std::vector<SiteTensor>& tensors() const { return tensors_; }

    double norm() const; // Frobenius norm of the center tensor

    // Moves the canonical center by QR steps; the represented state is unchanged.
    void canonicalize(int new_center);

    // Gate on sites (bond, bond+1); SVD recombination under the truncation
    // policy (keep s >= svd_eps * s_max, cap chi_max), renormalized, discarded
    // squared weight accumulated. Center ends at bond (Left) or bond+1 (Right).
    void apply_two_site_gate(int bond, const TwoSiteGate& gate, SweepDir dir);

    // Diagonal phases on sites (left_site, left_site+1, left_site+2), re-split
    // with two SVDs under the same policy. Center ends at left_site (Left) or
    // left_site+2 (Right).
    void apply_three_site_diagonal(int left_site, const ThreeSitePhases& phases, SweepDir dir);

    // Replaces sites (bond, bond+1) by the folded two-site block
    // m((s1*Dl + l), (s2*Dr + r)), split under the truncation policy. Used by
    // gate application and the DMRG update.
    void set_two_site(int bond, const MatrixXcd& folded_theta, SweepDir dir);

    // b^dag at site and site+1 (hard-core: annihilates occupied components).
    // Returns the squared norm before renormalization; throws if it vanishes.
    double apply_pair_creation(int site);

    // von Neumann entropy of the Schmidt spectrum across bond b (sites b|b+1).
    double bond_entropy(int bond);
    double max_bond_entropy();

    std::vector<double> density();
    double half_current(double J);
    double total_particles();

private:
    void move_center_right();
    void move_center_left();
    // SVD + truncation of a folded two-block matrix; returns kept rank.
    int truncated_svd(const MatrixXcd& m, MatrixXcd& u, VectorXd& s, MatrixXcd& vh);

    std::vector<SiteTensor> tensors_;
    int center_ = 1;
    int chi_max_ = 400;
    double svd_eps_ = 1e-8;
    double discarded_ = 0.0;
};

// Full overlap <a|b> by transfer-matrix contraction.
Complex overlap(const MpsState& a, const MpsState& b);

// Second-order symmetric Trotter schedule:
//   odd-bond half step, even-bond half step, interaction full step,
//   even-bond half step, odd-bond half step.
struct TebdSchedule {
    double dt = 0.1;

    enum class Layer { OddHalf, EvenHalf, Interaction };
    static std::vector<Layer> layers() {
        return {Layer::OddHalf, Layer::EvenHalf, Layer::Interaction,
                Layer::EvenHalf, Layer::OddHalf};
    }
};

// One TEBD step. All interaction phase gates commute (diagonal), so the
// interaction layer is a single left-to-right pass. Skipped entirely at W=0.
void tebd_step(MpsState& state, const ModelParams& params, const TebdSchedule& schedule);

struct DmrgOptions {
    int chi_max = 400;
    double svd_eps = 1e-8;
    double tol = 1e-9;        // energy change per sweep
    int max_sweeps = 60;
    double penalty = 6.0;     // lambda of the (N_hat - N)^2 number penalty
    std::uint64_t seed = 1;   // subspace-expansion noise in early sweeps
};

struct DmrgResult {
    double energy = 0.0; // <H> without the number penalty
    MpsState state;
    int sweeps = 0;
};

// Variational two-site sweep optimization at fixed particle number. The fixed-N
// sector is selected by a quadratic number penalty added to the MPO; the
// returned state satisfies |<N_hat> - N| <= 1e-8 or a ConvergenceError carries
// the energy trajectory.
DmrgResult ground_state_search(const ModelParams& params, int particles, const DmrgOptions& opts);

} // namespace hcb
