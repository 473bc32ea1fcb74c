// hcb - scenario runner for 1D hard-core boson expansion dynamics.
// Verbs: run <config>, sweep <config>, fit <csv> [--window a,b], resume <checkpoint>.
// Exit codes: 0 success, 1 usage/config, 2 integrity failure, 3 non-convergence.

#include "hcb/analysis.hpp"
#include "hcb/checkpoint.hpp"
#include "hcb/config.hpp"
#include "hcb/errors.hpp"
#include "hcb/scenario.hpp"

#include <CLI11.hpp>

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

namespace {

std::string fmt(double x) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", x);
    return buf;
}

// time + radius columns of a series.csv ('#' header lines skipped)
void read_series_csv(const std::string& path, std::vector<double>& times,
                     std::vector<double>& radius) {
    std::ifstream in(path);
    if (!in) throw hcb::UsageError("fit: cannot open " + path);
    std::string line;
    bool header_seen = false;
    while (std::getline(in, line)) {
        if (line.empty() || line[0] == '#') continue;
        if (!header_seen) { // column header row
            header_seen = true;
            if (line.rfind("time,radius", 0) != 0)
                throw hcb::UsageError("fit: " + path + " does not look like a series CSV");
            continue;
        }
        std::stringstream ss(line);
        std::string cell;
        if (!std::getline(ss, cell, ',')) continue;
        times.push_back(std::stod(cell));
        if (!std::getline(ss, cell, ',')) throw hcb::UsageError("fit: short row in " + path);
        radius.push_back(std::stod(cell));
    }
    if (times.empty()) throw hcb::UsageError("fit: no data rows in " + path);
}

int run_verb(const std::string& config_path) {
    const hcb::ScenarioConfig cfg = hcb::ScenarioConfig::parse_file(config_path);
    if (cfg.scenario == "sweep")
        throw hcb::UsageError("this config sets scenario = sweep; use the sweep verb");
    const hcb::RunOutcome out = hcb::run_scenario(cfg);
    hcb::write_run_outputs(out, cfg);
    const std::string dir = hcb::resolve_output_dir(cfg.output_dir);
    std::cout << "engine: " << out.engine_used << "\n";
    if (out.velocity_fit)
        std::cout << "V = " << fmt(out.velocity_fit->slope)
                  << " (r2 = " << fmt(out.velocity_fit->r_squared) << ")\n";
    std::cout << "melt_time = " << (out.melt ? fmt(*out.melt) : "none") << "\n";
    std::cout << "wrote " << dir << "/series.csv\n";
    if (out.wavefront_warning)
        std::cerr << "warning: wavefront reached the boundary guard band before t_max\n";
    if (!out.integrity_ok) {
        std::cerr << "integrity failure: " << out.integrity_msg << "\n";
        return 2;
    }
    return 0;
}

int sweep_verb(const std::string& config_path) {
    const hcb::ScenarioConfig cfg = hcb::ScenarioConfig::parse_file(config_path);
    const hcb::SweepOutcome out = hcb::run_sweep(cfg);
    hcb::write_sweep_outputs(out, cfg);
    const std::string dir = hcb::resolve_output_dir(cfg.output_dir);
    std::cout << "wrote " << dir << "/sweep_report.txt (" << out.points.size() << " points)\n";
    for (const auto& line : out.aggregate_lines) std::cout << line << "\n";
    if (out.partial) {
        std::cerr << "sweep is partial: at least one point failed\n";
        return 2;
    }
    return 0;
}

int fit_verb(const std::string& csv_path, const std::string& window) {
    double a = 2.0, b = 10.0;
    if (!window.empty()) {
        std::stringstream ss(window);
        char comma = 0;
        if (!(ss >> a >> comma >> b) || comma != ',')
            throw hcb::UsageError("fit: --window wants 'a,b'");
    }
    std::vector<double> times, radius;
    read_series_csv(csv_path, times, radius);
    const hcb::FitResult lin = hcb::fit_radius_window(times, radius, a, b);
    const hcb::FitResult sq = hcb::fit_sqrt_t(times, radius, a, b);
    std::cout << "window = " << fmt(a) << "," << fmt(b) << "\n";
    std::cout << "linear_slope = " << fmt(lin.slope) << "\n";
    std::cout << "linear_intercept = " << fmt(lin.intercept) << "\n";
    std::cout << "linear_r2 = " << fmt(lin.r_squared) << "\n";
    std::cout << "sqrt_slope = " << fmt(sq.slope) << "\n";
    std::cout << "sqrt_r2 = " << fmt(sq.r_squared) << "\n";
    std::cout << "n_points = " << lin.n_points << "\n";
    return 0;
}

int resume_verb(const std::string& checkpoint_path) {
    const hcb::Checkpoint ck = hcb::load_checkpoint(checkpoint_path);
    const hcb::RunOutcome out = hcb::run_scenario(ck.cfg, &ck);
    hcb::write_run_outputs(out, ck.cfg);
    std::cout << "resumed from t = " << fmt(ck.rows.empty() ? 0.0 : ck.rows.back().time) << "\n";
    std::cout << "wrote " << hcb::resolve_output_dir(ck.cfg.output_dir) << "/series.csv\n";
    if (!out.integrity_ok) {
        std::cerr << "integrity failure: " << out.integrity_msg << "\n";
        return 2;
    }
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    // avoid oversubscription: BLAS threading stays off unless the user insists
    setenv("OPENBLAS_NUM_THREADS", "1", 0);

    CLI::App app{"1D hard-core boson expansion dynamics (MPS/TEBD, exact, free-fermion engines)"};
    app.require_subcommand(1);

    std::string config_path, csv_path, checkpoint_path, window;
    auto* run = app.add_subcommand("run", "run one scenario from a config file");
    run->add_option("config", config_path, "key = value config file")->required();
    auto* sweep = app.add_subcommand("sweep", "run a parameter sweep from a config file");
    sweep->add_option("config", config_path, "key = value config file")->required();
    auto* fit = app.add_subcommand("fit", "fit an existing series CSV");
    fit->add_option("csv", csv_path, "series.csv produced by run")->required();
    fit->add_option("--window", window, "fit window 'a,b' (default 2,10)");
    auto* resume = app.add_subcommand("resume", "continue a checkpointed run");
    resume->add_option("checkpoint", checkpoint_path, "checkpoint.bin path")->required();

    CLI11_PARSE(app, argc, argv);

    try {
        if (run->parsed()) return run_verb(config_path);
        if (sweep->parsed()) return sweep_verb(config_path);
        if (fit->parsed()) return fit_verb(csv_path, window);
        if (resume->parsed()) return resume_verb(checkpoint_path);
    } catch (const hcb::UsageError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const hcb::ConvergenceError& e) {
        std::cerr << "convergence error: " << e.what() << "\n";
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 0;
}
