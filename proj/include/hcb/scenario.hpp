#pragma once

#include "hcb/analysis.hpp"
#include "hcb/config.hpp"
#include "hcb/observables.hpp"

#include <optional>
#include <string>
#include <vector>

namespace hcb {

struct Checkpoint; // checkpoint.hpp

struct RunOutcome {
    ObservableSeries series;
    std::string engine_used;
    std::optional<double> melt;
    std::optional<FitResult> velocity_fit;  // linear in t over the fit window
    std::optional<FitResult> sqrt_fit;      // linear in sqrt(t), same window
    double pair_weight = -1.0;              // gs-quench only
    double gs_energy = 0.0;                 // gs-quench only
    int dmrg_sweeps = 0;
    bool wavefront_warning = false;
    bool discard_alarm_tripped = false;
    bool integrity_ok = true;
    std::string integrity_msg;

    RunOutcome(ModelParams p, int n, std::string tag) : series(p, n, std::move(tag)) {}
};

// Runs one scenario (mi-expansion or gs-quench). `resume` continues a
// checkpointed run; outputs are not written here.
RunOutcome run_scenario(const ScenarioConfig& cfg, const Checkpoint* resume = nullptr);

// series.csv + report.txt under cfg.output_dir (resolved against the output
// root override if the environment sets one).
void write_run_outputs(const RunOutcome& out, const ScenarioConfig& cfg);

std::string resolve_output_dir(const std::string& dir);
inline constexpr const char* kOutputRootEnv = "HCB_OUTPUT_ROOT";

struct SweepPoint {
    double W = 0.0;
    int N = 0, L = 0;
    std::string tag;
    bool ok = false;
    std::string error;
    double velocity = 0.0;
    double r_squared = 0.0;
    std::optional<double> melt;
    double pair_weight = -1.0;
};

struct SweepOutcome {
    std::vector<SweepPoint> points;
    bool partial = false;
    std::vector<std::string> aggregate_lines; // report fragments
};

SweepOutcome run_sweep(const ScenarioConfig& cfg);
void write_sweep_outputs(const SweepOutcome& out, const ScenarioConfig& cfg);

} // namespace hcb
