#include "hcb/scenario.hpp"

#include "hcb/checkpoint.hpp"
#include "hcb/errors.hpp"
#include "hcb/fock.hpp"
#include "hcb/freefermion.hpp"
#include "hcb/mps.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

namespace hcb {

namespace {

std::string fmt(double x) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", x);
    return buf;
}

// Reflections corrupt the fit window once the fastest particles come within
// reach of a boundary; warn when any density within 6 sites of an edge
// exceeds 1e-4.
bool near_boundary(const std::vector<double>& n) {
    const int L = static_cast<int>(n.size());
    const int margin = std::min(6, L);
    for (int i = 0; i < margin; ++i)
        if (n[static_cast<size_t>(i)] > 1e-4 || n[static_cast<size_t>(L - 1 - i)] > 1e-4)
            return true;
    return false;
}

struct Measurement {
    std::vector<double> density;
    double current = 0.0;
    double entropy = 0.0;
    double discarded = 0.0;
};

void record_measurement(RunOutcome& out, const ScenarioConfig& cfg, double t, const Measurement& m) {
    out.series.record(t, m.density, m.current, m.entropy, m.discarded);
    if (!out.wavefront_warning && near_boundary(m.density)) out.wavefront_warning = true;
    const double drift = std::abs(out.series.total_n_col().back() - cfg.N);
    if (drift > 1e-8 + 10.0 * m.discarded && out.integrity_ok) {
        out.integrity_ok = false;
        out.integrity_msg = "particle number drift " + fmt(drift) + " at t = " + fmt(t);
    }
}

std::vector<int> box_occupations(const ScenarioConfig& cfg) {
    const auto [i1, i2] = cfg.effective_box();
    std::vector<int> occ(static_cast<size_t>(cfg.L), 0);
    for (int i = i1; i <= i2; ++i) occ[static_cast<size_t>(i - 1)] = 1;
    return occ;
}

void replay_rows(RunOutcome& out, const ScenarioConfig& cfg, const Checkpoint& ck) {
    for (const auto& r : ck.rows) {
        Measurement m{r.density, r.half_current, r.entropy_max, r.discarded};
        record_measurement(out, cfg, r.time, m);
    }
}

void maybe_checkpoint(const RunOutcome& out, const ScenarioConfig& cfg, double t,
                      const FockVector* fock, const MpsState* mps) {
    if (cfg.checkpoint_every <= 0.0) return;
    const double chunks = t / cfg.checkpoint_every;
    if (t == 0.0 || std::abs(chunks - std::round(chunks)) > 1e-9) return;
    Checkpoint ck;
    ck.cfg = cfg;
    ck.engine = out.engine_used;
    ck.pair_weight = out.pair_weight;
    ck.gs_energy = out.gs_energy;
    ck.dmrg_sweeps = out.dmrg_sweeps;
    for (size_t r = 0; r < out.series.rows(); ++r) {
        Checkpoint::Row row;
        row.time = out.series.times()[r];
        row.half_current = out.series.half_current_col()[r];
        row.entropy_max = out.series.entropy_max_col()[r];
        row.discarded = out.series.discarded_weight_col()[r];
        row.density = out.series.density_rows()[r];
        ck.rows.push_back(std::move(row));
    }
    if (fock) ck.fock_amps = fock->amps;
    if (mps) {
        ck.mps_tensors = mps->tensors();
        ck.mps_center = mps->center();
        ck.mps_discarded = mps->discarded_weight();
    }
    save_checkpoint(ck, resolve_output_dir(cfg.output_dir) + "/checkpoint.bin");
}

void run_free_fermion(RunOutcome& out, const ScenarioConfig& cfg, const ModelParams& params,
                      const Checkpoint* resume) {
    const CorrelationMatrix c0 = correlation_from_occupations(box_occupations(cfg));
    size_t first = 0;
    if (resume) {
        replay_rows(out, cfg, *resume);
        first = resume->rows.size();
    }
    const int n_records = static_cast<int>(std::round(cfg.effective_t_max() / cfg.record_every));
    for (int k = static_cast<int>(first); k <= n_records; ++k) {
        const double t = k * cfg.record_every;
        const CorrelationMatrix ct = evolve_correlation(c0, params, t);
        Measurement m;
        m.density = density_from_correlation(ct);
        m.current = half_current_from_correlation(ct, params.hop);
        record_measurement(out, cfg, t, m);
        maybe_checkpoint(out, cfg, t, nullptr, nullptr);
    }
}

void run_exact(RunOutcome& out, const ScenarioConfig& cfg, const ModelParams& params,
               const FockBasis& basis, FockVector state, const Checkpoint* resume) {
    size_t first = 0;
    if (resume) {
        replay_rows(out, cfg, *resume);
        first = resume->rows.size();
        state.amps = resume->fock_amps;
    }
    const FockEvolver evolver(basis, params, 1e-10, cfg.threads);
    const int n_records = static_cast<int>(std::round(cfg.effective_t_max() / cfg.record_every));
    for (int k = static_cast<int>(first); k <= n_records; ++k) {
        const double t = k * cfg.record_every;
        if (k > 0) evolver.step(state, cfg.record_every);
        Measurement m;
        m.density = density(state, cfg.threads);
        m.current = half_current(state, params.hop, cfg.threads);
        record_measurement(out, cfg, t, m);
        maybe_checkpoint(out, cfg, t, &state, nullptr);
    }
}

void run_mps(RunOutcome& out, const ScenarioConfig& cfg, const ModelParams& params, MpsState state,
             const Checkpoint* resume) {
    size_t first = 0;
    if (resume) {
        replay_rows(out, cfg, *resume);
        first = resume->rows.size();
        state = MpsState::from_raw(resume->mps_tensors, resume->mps_center, cfg.chi_max,
                                   cfg.svd_eps, resume->mps_discarded);
    }
    const TebdSchedule schedule{cfg.dt};
    const int steps_per_record = static_cast<int>(std::round(cfg.record_every / cfg.dt));
    const int n_records = static_cast<int>(std::round(cfg.effective_t_max() / cfg.record_every));
    double discarded_prev = state.discarded_weight();
    for (int k = static_cast<int>(first); k <= n_records; ++k) {
        const double t = k * cfg.record_every;
        if (k > 0) {
            for (int s = 0; s < steps_per_record; ++s) {
                tebd_step(state, params, schedule);
                const double d = state.discarded_weight();
                if (d - discarded_prev > cfg.discard_alarm) out.discard_alarm_tripped = true;
                discarded_prev = d;
            }
        }
        Measurement m;
        m.density = state.density();
        m.current = state.half_current(params.hop);
        m.entropy = state.max_bond_entropy();
        m.discarded = state.discarded_weight();
        record_measurement(out, cfg, t, m);
        maybe_checkpoint(out, cfg, t, nullptr, &state);
    }
}

} // namespace

std::string resolve_output_dir(const std::string& dir) {
    const char* root = std::getenv(kOutputRootEnv);
    std::filesystem::path p(dir);
    if (root && *root && p.is_relative()) p = std::filesystem::path(root) / p;
    std::filesystem::create_directories(p);
    return p.string();
}

RunOutcome run_scenario(const ScenarioConfig& cfg, const Checkpoint* resume) {
    cfg.validate();
    if (cfg.scenario == "sweep")
        throw UsageError("run_scenario: scenario=sweep belongs to the sweep verb");

    const std::string engine = engine_auto_choice(cfg);
    const ModelParams params(cfg.J, cfg.W, cfg.L);
    RunOutcome out(params, cfg.N, engine);
    out.engine_used = engine;
    if (resume) {
        out.pair_weight = resume->pair_weight;
        out.gs_energy = resume->gs_energy;
        out.dmrg_sweeps = resume->dmrg_sweeps;
    }

    if (cfg.scenario == "mi-expansion") {
        if (engine == "free-fermion") {
            run_free_fermion(out, cfg, params, resume);
        } else if (engine == "exact") {
            const FockBasis basis(cfg.L, cfg.N);
            run_exact(out, cfg, params, basis, box_state(basis, cfg.effective_box().first,
                                                         cfg.effective_box().second),
                      resume);
        } else {
            run_mps(out, cfg, params,
                    MpsState::from_occupations(box_occupations(cfg), cfg.chi_max, cfg.svd_eps),
                    resume);
        }
    } else { // gs-quench
        const int site = cfg.L / 2;
        if (engine == "exact") {
            const FockBasis small_basis(cfg.L, cfg.N - 2);
            const FockBasis big_basis(cfg.L, cfg.N);
            FockVector initial;
            if (!resume) {
                const GroundStateResult gs = ground_state(small_basis, params, cfg.threads);
                out.gs_energy = gs.energy;
                PairCreationResult pc = apply_pair_creation(gs.state, site, big_basis);
                out.pair_weight = pc.weight;
                initial = std::move(pc.state);
            } else {
                initial.basis = &big_basis;
            }
            run_exact(out, cfg, params, big_basis, std::move(initial), resume);
        } else if (engine == "mps") {
            MpsState state;
            if (!resume) {
                DmrgOptions opts;
                opts.chi_max = cfg.chi_max;
                opts.svd_eps = cfg.svd_eps;
                opts.tol = cfg.dmrg_tol;
                opts.max_sweeps = cfg.dmrg_max_sweeps;
                opts.penalty = cfg.dmrg_penalty;
                opts.seed = cfg.seed;
                DmrgResult gs = ground_state_search(params, cfg.N - 2, opts);
                out.gs_energy = gs.energy;
                out.dmrg_sweeps = gs.sweeps;
                state = std::move(gs.state);
                out.pair_weight = state.apply_pair_creation(site);
                state.reset_discarded_weight(); // evolution bookkeeping starts here
            }
            run_mps(out, cfg, params, std::move(state), resume);
        } else {
            throw UsageError("gs-quench needs engine exact or mps");
        }
    }

    const double window_hi = std::min(cfg.fit_tmax, cfg.effective_t_max());
    try {
        out.velocity_fit = fit_velocity(out.series, cfg.fit_tmin, window_hi);
        out.sqrt_fit = fit_sqrt_t(out.series.times(), out.series.radius_col(), cfg.fit_tmin, window_hi);
    } catch (const UsageError&) {
        // short runs legitimately have no fit; the report says so
    }
    out.melt = melt_time(out.series, cfg.melt_threshold);
    return out;
}

void write_run_outputs(const RunOutcome& out, const ScenarioConfig& cfg) {
    const std::string dir = resolve_output_dir(cfg.output_dir);
    auto kv = cfg.to_kv();
    kv.push_back("engine_used = " + out.engine_used);
    {
        std::ofstream csv(dir + "/series.csv", std::ios::trunc);
        if (!csv) throw UsageError("cannot write " + dir + "/series.csv");
        out.series.write_csv(csv, kv);
    }
    std::ofstream rep(dir + "/report.txt", std::ios::trunc);
    if (!rep) throw UsageError("cannot write " + dir + "/report.txt");
    rep << "format = hcb-report-v1\n";
    for (const auto& line : kv) rep << line << "\n";
    if (out.velocity_fit) {
        rep << "velocity = " << fmt(out.velocity_fit->slope) << "\n";
        rep << "velocity_r2 = " << fmt(out.velocity_fit->r_squared) << "\n";
        rep << "velocity_n_points = " << out.velocity_fit->n_points << "\n";
    } else {
        rep << "velocity = none\n";
    }
    if (out.sqrt_fit) {
        rep << "sqrt_fit_slope = " << fmt(out.sqrt_fit->slope) << "\n";
        rep << "sqrt_fit_r2 = " << fmt(out.sqrt_fit->r_squared) << "\n";
    }
    rep << "melt_time = " << (out.melt ? fmt(*out.melt) : "none") << "\n";
    if (cfg.scenario == "gs-quench") {
        rep << "pair_weight = " << fmt(out.pair_weight) << "\n";
        rep << "gs_energy = " << fmt(out.gs_energy) << "\n";
        if (out.engine_used == "mps") rep << "dmrg_sweeps = " << out.dmrg_sweeps << "\n";
    }
    if (!out.series.discarded_weight_col().empty())
        rep << "discarded_weight_total = " << fmt(out.series.discarded_weight_col().back()) << "\n";
    rep << "wavefront_warning = " << (out.wavefront_warning ? 1 : 0) << "\n";
    rep << "discard_alarm = " << (out.discard_alarm_tripped ? 1 : 0) << "\n";
    rep << "integrity = " << (out.integrity_ok ? "ok" : out.integrity_msg) << "\n";
}

namespace {

std::string point_tag(const ScenarioConfig& base, const SweepPoint& p) {
    std::string tag;
    if (!base.sweep_w.empty()) tag += "W" + fmt(p.W);
    if (!base.sweep_n.empty()) tag += (tag.empty() ? "" : "_") + std::string("N") + std::to_string(p.N);
    if (!base.sweep_l.empty()) tag += (tag.empty() ? "" : "_") + std::string("L") + std::to_string(p.L);
    return tag;
}

ScenarioConfig point_config(const ScenarioConfig& base, const SweepPoint& p) {
    ScenarioConfig pc = base;
    pc.scenario = base.sweep_scenario;
    pc.sweep_w.clear();
    pc.sweep_n.clear();
    pc.sweep_l.clear();
    pc.W = p.W;
    pc.N = p.N;
    pc.L = p.L;
    pc.threads = 1; // points own the parallelism budget
    pc.checkpoint_every = 0.0;
    pc.output_dir = base.output_dir + "/" + p.tag;
    if (!base.sweep_n.empty() || !base.sweep_l.empty()) {
        pc.box_i1 = pc.box_i2 = 0; // re-center the box per point
    }
    pc.validate();
    return pc;
}

} // namespace

SweepOutcome run_sweep(const ScenarioConfig& cfg) {
    cfg.validate();
    if (cfg.scenario != "sweep")
        throw UsageError("run_sweep: config must set scenario = sweep");

    std::vector<double> ws = cfg.sweep_w.empty() ? std::vector<double>{cfg.W} : cfg.sweep_w;
    std::vector<int> ns = cfg.sweep_n.empty() ? std::vector<int>{cfg.N} : cfg.sweep_n;
    std::vector<int> ls = cfg.sweep_l.empty() ? std::vector<int>{cfg.L} : cfg.sweep_l;

    SweepOutcome out;
    for (double w : ws)
        for (int n : ns)
            for (int l : ls) {
                SweepPoint p;
                p.W = w;
                p.L = l;
                p.N = n;
                if (cfg.sweep_scenario == "gs-quench" && !cfg.sweep_l.empty()) {
                    if ((2 * l) % 3 != 0)
                        throw UsageError("sweep: gs-quench L sweep needs 2L/3 integer, got L=" +
                                         std::to_string(l));
                    p.N = 2 * l / 3;
                }
                p.tag = point_tag(cfg, p);
                out.points.push_back(std::move(p));
            }

    const int n_pts = static_cast<int>(out.points.size());
#ifdef _OPENMP
#pragma omp parallel for schedule(dynamic) num_threads(std::max(1, cfg.threads)) if (cfg.threads > 1)
#endif
    for (int i = 0; i < n_pts; ++i) {
        SweepPoint& p = out.points[static_cast<size_t>(i)];
        try {
            const ScenarioConfig pc = point_config(cfg, p);
            RunOutcome run = run_scenario(pc);
            write_run_outputs(run, pc);
            if (!run.integrity_ok) throw IntegrityError(run.integrity_msg);
            if (!run.velocity_fit) throw UsageError("no velocity fit (too few points in window)");
            p.velocity = run.velocity_fit->slope;
            p.r_squared = run.velocity_fit->r_squared;
            p.melt = run.melt;
            p.pair_weight = run.pair_weight;
            p.ok = true;
        } catch (const std::exception& e) {
            p.ok = false;
            p.error = e.what();
        }
    }
    for (const auto& p : out.points)
        if (!p.ok) out.partial = true;

    // aggregation
    const bool has_w = !cfg.sweep_w.empty(), has_n = !cfg.sweep_n.empty(),
               has_l = !cfg.sweep_l.empty();
    std::string mode = cfg.aggregate;
    if (mode == "auto") {
        if (has_w && has_l) mode = "peak-extrapolate";
        else if (has_w && has_n) mode = "extrapolate"; // per W value, over N
        else if (has_w) mode = "peak";
        else mode = "extrapolate";
    }

    const auto points_ok = [&](auto pred) {
        std::vector<const SweepPoint*> sel;
        for (const auto& p : out.points)
            if (p.ok && pred(p)) sel.push_back(&p);
        return sel;
    };

    try {
        if (mode == "extrapolate") {
            for (double w : ws) {
                const auto sel = points_ok([&](const SweepPoint& p) { return p.W == w; });
                std::vector<std::pair<double, double>> pts;
                for (const auto* p : sel)
                    pts.emplace_back(has_n ? p->N : p->L, p->velocity);
                if (pts.size() >= 3) {
                    const auto ex = extrapolate_inverse_size(pts);
                    std::ostringstream line;
                    line << "extrapolate W=" << fmt(w) << ": limit = " << fmt(ex.limit_value)
                         << ", coefficient = " << fmt(ex.coefficient) << ", r2 = " << fmt(ex.r_squared);
                    out.aggregate_lines.push_back(line.str());
                }
            }
        } else if (mode == "peak") {
            const auto sel = points_ok([](const SweepPoint&) { return true; });
            std::vector<std::pair<double, double>> pts;
            for (const auto* p : sel) pts.emplace_back(p->W, p->velocity);
            const auto pk = find_velocity_peak(pts);
            out.aggregate_lines.push_back("peak: w_peak = " + fmt(pk.w_peak) +
                                          ", v_peak = " + fmt(pk.v_peak));
        } else if (mode == "peak-extrapolate") {
            std::vector<std::pair<double, double>> peaks; // (L, W_peak)
            for (int l : ls) {
                const auto sel = points_ok([&](const SweepPoint& p) { return p.L == l; });
                std::vector<std::pair<double, double>> pts;
                for (const auto* p : sel) pts.emplace_back(p->W, p->velocity);
                const auto pk = find_velocity_peak(pts);
                peaks.emplace_back(l, pk.w_peak);
                out.aggregate_lines.push_back("peak L=" + std::to_string(l) + ": w_peak = " +
                                              fmt(pk.w_peak) + ", v_peak = " + fmt(pk.v_peak));
            }
            if (peaks.size() >= 3) {
                const auto ex = extrapolate_inverse_size(peaks);
                out.aggregate_lines.push_back("extrapolate peaks: W_c = " + fmt(ex.limit_value) +
                                              ", coefficient = " + fmt(ex.coefficient) +
                                              ", r2 = " + fmt(ex.r_squared));
            }
        }
    } catch (const std::exception& e) {
        out.partial = true;
        out.aggregate_lines.push_back(std::string("aggregate_error = ") + e.what());
    }
    return out;
}

void write_sweep_outputs(const SweepOutcome& out, const ScenarioConfig& cfg) {
    const std::string dir = resolve_output_dir(cfg.output_dir);
    std::ofstream rep(dir + "/sweep_report.txt", std::ios::trunc);
    if (!rep) throw UsageError("cannot write " + dir + "/sweep_report.txt");
    rep << "format = hcb-sweep-v1\n";
    for (const auto& line : cfg.to_kv()) rep << line << "\n";
    rep << "partial = " << (out.partial ? 1 : 0) << "\n";
    for (const auto& p : out.points) {
        rep << "point " << p.tag << ": ";
        if (p.ok) {
            rep << "V = " << fmt(p.velocity) << ", r2 = " << fmt(p.r_squared);
            if (p.melt) rep << ", melt = " << fmt(*p.melt);
            if (p.pair_weight >= 0.0) rep << ", pair_weight = " << fmt(p.pair_weight);
        } else {
            rep << "FAILED: " << p.error;
        }
        rep << "\n";
    }
    for (const auto& line : out.aggregate_lines) rep << line << "\n";
}

} // namespace hcb
