#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

namespace hcb {

// Flat key = value run configuration ('#' starts a comment, lists are
// comma-separated). Unknown keys are usage errors.
struct ScenarioConfig {
    std::string scenario;        // mi-expansion | gs-quench | sweep
    std::string engine = "auto"; // auto | free-fermion | exact | mps

    double J = 1.0;
    double W = 0.0;
    int L = 0;
    int N = 0;
    int box_i1 = 0, box_i2 = 0; // 0,0 = centered box of width N (mi-expansion)

    double t_max = -1.0; // <0 = scenario default: 12 (mi-expansion), 8 (gs-quench)
    double dt = 0.1;
    double record_every = 0.5;
    int chi_max = 400;
    double svd_eps = 1e-8;
    double fit_tmin = 2.0, fit_tmax = 10.0;
    std::string output_dir = "out";
    std::uint64_t seed = 1;
    double melt_threshold = 0.9; // onset of melting of the central plateau
    int threads = 1;             // 1 = sequential (bit-reproducible)
    double checkpoint_every = 0.0; // time units; 0 = off
    double discard_alarm = 1e-6;   // per-step discarded-weight alarm (MPS)

    double dmrg_tol = 1e-9;
    int dmrg_max_sweeps = 60;
    double dmrg_penalty = 6.0;

    // sweep axes (exactly one or two non-empty when scenario = sweep)
    std::string sweep_scenario = "mi-expansion";
    std::vector<double> sweep_w;
    std::vector<int> sweep_n;
    std::vector<int> sweep_l;
    std::string aggregate = "auto"; // auto | none | extrapolate | peak | peak-extrapolate

    static ScenarioConfig parse(std::istream& is);
    static ScenarioConfig parse_file(const std::string& path);

    // Throws UsageError naming the violated invariant.
    void validate() const;

    // Effective values
    double effective_t_max() const;
    std::pair<int, int> effective_box() const; // mi-expansion box (i1, i2)

    // Resolved key = value lines (stable order) for CSV/report headers and
    // checkpoint embedding; parse(to_kv()) round-trips.
    std::vector<std::string> to_kv() const;
};

std::string engine_auto_choice(const ScenarioConfig& cfg);

} // namespace hcb
