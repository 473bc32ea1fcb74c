#pragma once

#include "hcb/config.hpp"
#include "hcb/linalg.hpp"
#include "hcb/mps.hpp"

#include <string>
#include <vector>

namespace hcb {

// Binary checkpoint, format tag HCBCKPT1. Doubles are dumped raw so a resumed
// sequential run reproduces the uninterrupted run bit for bit.
struct Checkpoint {
    ScenarioConfig cfg;
    std::string engine; // free-fermion | exact | mps
    double pair_weight = -1.0;
    double gs_energy = 0.0;
    int dmrg_sweeps = 0;

    struct Row {
        double time = 0.0;
        double half_current = 0.0;
        double entropy_max = 0.0;
        double discarded = 0.0;
        std::vector<double> density;
    };
    std::vector<Row> rows;

    // engine payloads (one of them populated)
    VectorXcd fock_amps;                          // exact
    std::vector<MpsState::SiteTensor> mps_tensors; // mps
    int mps_center = 1;
    double mps_discarded = 0.0;
};

void save_checkpoint(const Checkpoint& ck, const std::string& path);
Checkpoint load_checkpoint(const std::string& path);

} // namespace hcb
