#include "hcb/config.hpp"

#include "hcb/errors.hpp"
#include "hcb/fock_basis.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace hcb {

namespace {

std::string trim(const std::string& s) {
    const auto a = s.find_first_not_of(" \t\r\n");
    if (a == std::string::npos) return "";
    const auto b = s.find_last_not_of(" \t\r\n");
    return s.substr(a, b - a + 1);
}

std::vector<std::string> split_list(const std::string& s) {
    std::vector<std::string> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ',')) {
        item = trim(item);
        if (!item.empty()) out.push_back(item);
    }
    return out;
}

double to_double(const std::string& key, const std::string& v) {
    try {
        size_t pos = 0;
        const double x = std::stod(v, &pos);
        if (pos != v.size()) throw std::invalid_argument(v);
        return x;
    } catch (const std::exception&) {
        throw UsageError("config: bad numeric value '" + v + "' for key " + key);
    }
}

int to_int(const std::string& key, const std::string& v) {
    const double x = to_double(key, v);
    if (x != std::floor(x)) throw UsageError("config: key " + key + " wants an integer, got " + v);
    return static_cast<int>(x);
}

std::string fmt(double x) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", x);
    return buf;
}

} // namespace

ScenarioConfig ScenarioConfig::parse(std::istream& is) {
    ScenarioConfig cfg;
    std::string line;
    int lineno = 0;
    while (std::getline(is, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw UsageError("config line " + std::to_string(lineno) + ": expected key = value");
        const std::string key = trim(line.substr(0, eq));
        const std::string val = trim(line.substr(eq + 1));

        if (key == "scenario") cfg.scenario = val;
        else if (key == "engine") cfg.engine = val;
        else if (key == "J") cfg.J = to_double(key, val);
        else if (key == "W") cfg.W = to_double(key, val);
        else if (key == "L") cfg.L = to_int(key, val);
        else if (key == "N") cfg.N = to_int(key, val);
        else if (key == "box_i1") cfg.box_i1 = to_int(key, val);
        else if (key == "box_i2") cfg.box_i2 = to_int(key, val);
        else if (key == "t_max") cfg.t_max = to_double(key, val);
        else if (key == "dt") cfg.dt = to_double(key, val);
        else if (key == "record_every") cfg.record_every = to_double(key, val);
        else if (key == "chi_max") cfg.chi_max = to_int(key, val);
        else if (key == "svd_eps") cfg.svd_eps = to_double(key, val);
        else if (key == "fit_window") {
            const auto parts = split_list(val);
            if (parts.size() != 2) throw UsageError("config: fit_window wants 'tmin,tmax'");
            cfg.fit_tmin = to_double(key, parts[0]);
            cfg.fit_tmax = to_double(key, parts[1]);
        } else if (key == "output_dir") cfg.output_dir = val;
        else if (key == "seed") cfg.seed = static_cast<std::uint64_t>(to_double(key, val));
        else if (key == "melt_threshold") cfg.melt_threshold = to_double(key, val);
        else if (key == "threads") cfg.threads = to_int(key, val);
        else if (key == "checkpoint_every") cfg.checkpoint_every = to_double(key, val);
        else if (key == "discard_alarm") cfg.discard_alarm = to_double(key, val);
        else if (key == "dmrg_tol") cfg.dmrg_tol = to_double(key, val);
        else if (key == "dmrg_max_sweeps") cfg.dmrg_max_sweeps = to_int(key, val);
        else if (key == "dmrg_penalty") cfg.dmrg_penalty = to_double(key, val);
        else if (key == "sweep_scenario") cfg.sweep_scenario = val;
        else if (key == "sweep_w") {
            cfg.sweep_w.clear();
            for (const auto& p : split_list(val)) cfg.sweep_w.push_back(to_double(key, p));
        } else if (key == "sweep_n") {
            cfg.sweep_n.clear();
            for (const auto& p : split_list(val)) cfg.sweep_n.push_back(to_int(key, p));
        } else if (key == "sweep_l") {
            cfg.sweep_l.clear();
            for (const auto& p : split_list(val)) cfg.sweep_l.push_back(to_int(key, p));
        } else if (key == "aggregate") cfg.aggregate = val;
        else throw UsageError("config: unknown key '" + key + "'");
    }
    return cfg;
}

ScenarioConfig ScenarioConfig::parse_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw UsageError("config: cannot open " + path);
    return parse(in);
}

double ScenarioConfig::effective_t_max() const {
    if (t_max >= 0.0) return t_max;
    const std::string sc = scenario == "sweep" ? sweep_scenario : scenario;
    return sc == "gs-quench" ? 8.0 : 12.0;
}

std::pair<int, int> ScenarioConfig::effective_box() const {
    if (box_i1 != 0 || box_i2 != 0) return {box_i1, box_i2};
    const int i1 = (L - N) / 2 + 1;
    return {i1, i1 + N - 1};
}

void ScenarioConfig::validate() const {
    const bool is_sweep = scenario == "sweep";
    const std::string sc = is_sweep ? sweep_scenario : scenario;
    if (sc != "mi-expansion" && sc != "gs-quench")
        throw UsageError("config: scenario must be mi-expansion, gs-quench or sweep (got '" +
                         (scenario.empty() ? "<unset>" : scenario) + "')");
    if (engine != "auto" && engine != "free-fermion" && engine != "exact" && engine != "mps")
        throw UsageError("config: engine must be auto, free-fermion, exact or mps");
    if (L < 3 && sweep_l.empty()) throw UsageError("config: L must be >= 3");
    if (engine == "free-fermion" && W != 0.0)
        throw UsageError("config: engine=free-fermion requires W = 0 (got W=" + fmt(W) + ")");
    if (dt <= 0.0) throw UsageError("config: dt must be > 0");
    if (record_every <= 0.0) throw UsageError("config: record_every must be > 0");
    const double steps = record_every / dt;
    if (std::abs(steps - std::round(steps)) > 1e-9)
        throw UsageError("config: record_every must be an integer multiple of dt");
    if (checkpoint_every > 0.0) {
        const double chunks = checkpoint_every / record_every;
        if (std::abs(chunks - std::round(chunks)) > 1e-9)
            throw UsageError("config: checkpoint_every must be a multiple of record_every");
    }
    if (melt_threshold <= 0.0 || melt_threshold >= 1.0)
        throw UsageError("config: melt_threshold must be in (0,1)");
    if (chi_max < 1) throw UsageError("config: chi_max must be >= 1");
    if (threads < 1) throw UsageError("config: threads must be >= 1");
    if (fit_tmax <= fit_tmin) throw UsageError("config: fit_window must satisfy tmin < tmax");

    if (!is_sweep) {
        if (N < 1) throw UsageError("config: N must be >= 1");
        if (sc == "mi-expansion") {
            const auto [i1, i2] = effective_box();
            if (i1 < 1 || i2 > L || i1 > i2)
                throw UsageError("config: box [" + std::to_string(i1) + "," + std::to_string(i2) +
                                 "] does not fit on L=" + std::to_string(L));
            if (i2 - i1 + 1 != N)
                throw UsageError("config: mi-expansion requires box width = N (box gives " +
                                 std::to_string(i2 - i1 + 1) + ", N=" + std::to_string(N) + ")");
        } else {
            if (3 * N != 2 * L)
                throw UsageError("config: gs-quench requires exactly N/L = 2/3 (got N=" +
                                 std::to_string(N) + ", L=" + std::to_string(L) + ")");
            if (engine == "free-fermion")
                throw UsageError("config: gs-quench needs engine exact or mps");
        }
    } else {
        const int axes = (sweep_w.empty() ? 0 : 1) + (sweep_n.empty() ? 0 : 1) +
                         (sweep_l.empty() ? 0 : 1);
        if (axes < 1 || axes > 2)
            throw UsageError("config: sweep wants exactly one or two sweep axes, got " +
                             std::to_string(axes));
        const size_t n_pts = std::max<size_t>(1, sweep_w.size()) *
                             std::max<size_t>(1, sweep_n.size()) *
                             std::max<size_t>(1, sweep_l.size());
        if (n_pts < 2) throw UsageError("config: degenerate sweep (needs >= 2 points)");
        if (aggregate != "auto" && aggregate != "none" && aggregate != "extrapolate" &&
            aggregate != "peak" && aggregate != "peak-extrapolate")
            throw UsageError("config: bad aggregate mode '" + aggregate + "'");
    }
}

std::vector<std::string> ScenarioConfig::to_kv() const {
    std::vector<std::string> kv;
    kv.push_back("scenario = " + scenario);
    kv.push_back("engine = " + engine);
    kv.push_back("J = " + fmt(J));
    kv.push_back("W = " + fmt(W));
    kv.push_back("L = " + std::to_string(L));
    kv.push_back("N = " + std::to_string(N));
    kv.push_back("box_i1 = " + std::to_string(box_i1));
    kv.push_back("box_i2 = " + std::to_string(box_i2));
    kv.push_back("t_max = " + fmt(t_max));
    kv.push_back("dt = " + fmt(dt));
    kv.push_back("record_every = " + fmt(record_every));
    kv.push_back("chi_max = " + std::to_string(chi_max));
    kv.push_back("svd_eps = " + fmt(svd_eps));
    kv.push_back("fit_window = " + fmt(fit_tmin) + "," + fmt(fit_tmax));
    kv.push_back("output_dir = " + output_dir);
    kv.push_back("seed = " + std::to_string(seed));
    kv.push_back("melt_threshold = " + fmt(melt_threshold));
    kv.push_back("threads = " + std::to_string(threads));
    kv.push_back("checkpoint_every = " + fmt(checkpoint_every));
    kv.push_back("discard_alarm = " + fmt(discard_alarm));
    kv.push_back("dmrg_tol = " + fmt(dmrg_tol));
    kv.push_back("dmrg_max_sweeps = " + std::to_string(dmrg_max_sweeps));
    kv.push_back("dmrg_penalty = " + fmt(dmrg_penalty));
    if (scenario == "sweep") {
        kv.push_back("sweep_scenario = " + sweep_scenario);
        const auto join_d = [](const std::vector<double>& v) {
            std::string s;
            for (size_t i = 0; i < v.size(); ++i) s += (i ? "," : "") + fmt(v[i]);
            return s;
        };
        const auto join_i = [](const std::vector<int>& v) {
            std::string s;
            for (size_t i = 0; i < v.size(); ++i) s += (i ? "," : "") + std::to_string(v[i]);
            return s;
        };
        if (!sweep_w.empty()) kv.push_back("sweep_w = " + join_d(sweep_w));
        if (!sweep_n.empty()) kv.push_back("sweep_n = " + join_i(sweep_n));
        if (!sweep_l.empty()) kv.push_back("sweep_l = " + join_i(sweep_l));
        kv.push_back("aggregate = " + aggregate);
    }
    return kv;
}

std::string engine_auto_choice(const ScenarioConfig& cfg) {
    if (cfg.engine != "auto") return cfg.engine;
    const std::string sc = cfg.scenario == "sweep" ? cfg.sweep_scenario : cfg.scenario;
    if (cfg.W == 0.0 && sc != "gs-quench") return "free-fermion";
    // exact if the largest sector involved fits under the capacity cap
    const std::uint64_t dim = binomial(cfg.L, cfg.N);
    if (dim != 0 && dim <= static_cast<std::uint64_t>(kFockDimCap)) return "exact";
    return "mps";
}

} // namespace hcb
