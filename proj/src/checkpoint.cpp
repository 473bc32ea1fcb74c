#include "hcb/checkpoint.hpp"

#include "hcb/errors.hpp"

#include <cstdint>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace hcb {

namespace {

constexpr char kMagic[9] = "HCBCKPT1";

void put_u64(std::ostream& os, std::uint64_t v) { os.write(reinterpret_cast<const char*>(&v), 8); }
void put_f64(std::ostream& os, double v) { os.write(reinterpret_cast<const char*>(&v), 8); }
void put_f64s(std::ostream& os, const double* p, size_t n) {
    os.write(reinterpret_cast<const char*>(p), static_cast<std::streamsize>(8 * n));
}

std::uint64_t get_u64(std::istream& is) {
    std::uint64_t v = 0;
    is.read(reinterpret_cast<char*>(&v), 8);
    return v;
}
double get_f64(std::istream& is) {
    double v = 0;
    is.read(reinterpret_cast<char*>(&v), 8);
    return v;
}
void get_f64s(std::istream& is, double* p, size_t n) {
    is.read(reinterpret_cast<char*>(p), static_cast<std::streamsize>(8 * n));
}

} // namespace

void save_checkpoint(const Checkpoint& ck, const std::string& path) {
    const std::string tmp = path + ".tmp";
    {
        std::ofstream os(tmp, std::ios::binary | std::ios::trunc);
        if (!os) throw UsageError("checkpoint: cannot write " + tmp);
        os.write(kMagic, 8);

        std::ostringstream cfg_text;
        for (const auto& kv : ck.cfg.to_kv()) cfg_text << kv << "\n";
        const std::string cfg_str = cfg_text.str();
        put_u64(os, cfg_str.size());
        os.write(cfg_str.data(), static_cast<std::streamsize>(cfg_str.size()));

        put_u64(os, ck.engine.size());
        os.write(ck.engine.data(), static_cast<std::streamsize>(ck.engine.size()));
        put_f64(os, ck.pair_weight);
        put_f64(os, ck.gs_energy);
        put_u64(os, static_cast<std::uint64_t>(ck.dmrg_sweeps));

        put_u64(os, ck.rows.size());
        for (const auto& r : ck.rows) {
            put_f64(os, r.time);
            put_f64(os, r.half_current);
            put_f64(os, r.entropy_max);
            put_f64(os, r.discarded);
            put_u64(os, r.density.size());
            put_f64s(os, r.density.data(), r.density.size());
        }

        if (ck.engine == "exact") {
            put_u64(os, static_cast<std::uint64_t>(ck.fock_amps.size()));
            put_f64s(os, reinterpret_cast<const double*>(ck.fock_amps.data()),
                     2 * static_cast<size_t>(ck.fock_amps.size()));
        } else if (ck.engine == "mps") {
            put_u64(os, ck.mps_tensors.size());
            put_u64(os, static_cast<std::uint64_t>(ck.mps_center));
            put_f64(os, ck.mps_discarded);
            for (const auto& t : ck.mps_tensors) {
                put_u64(os, static_cast<std::uint64_t>(t[0].rows()));
                put_u64(os, static_cast<std::uint64_t>(t[0].cols()));
                for (int s = 0; s < 2; ++s)
                    put_f64s(os, reinterpret_cast<const double*>(t[static_cast<size_t>(s)].data()),
                             2 * static_cast<size_t>(t[static_cast<size_t>(s)].size()));
            }
        }
        if (!os) throw UsageError("checkpoint: write failed for " + tmp);
    }
    if (std::rename(tmp.c_str(), path.c_str()) != 0)
        throw UsageError("checkpoint: cannot move " + tmp + " to " + path);
}

Checkpoint load_checkpoint(const std::string& path) {
    std::ifstream is(path, std::ios::binary);
    if (!is) throw UsageError("checkpoint: cannot open " + path);
    char magic[8];
    is.read(magic, 8);
    if (!is || std::string(magic, 8) != std::string(kMagic, 8))
        throw UsageError("checkpoint: " + path + " has no HCBCKPT1 tag");

    Checkpoint ck;
    const auto cfg_len = get_u64(is);
    std::string cfg_str(cfg_len, '\0');
    is.read(cfg_str.data(), static_cast<std::streamsize>(cfg_len));
    std::istringstream cfg_in(cfg_str);
    ck.cfg = ScenarioConfig::parse(cfg_in);

    const auto eng_len = get_u64(is);
    ck.engine.resize(eng_len);
    is.read(ck.engine.data(), static_cast<std::streamsize>(eng_len));
    ck.pair_weight = get_f64(is);
    ck.gs_energy = get_f64(is);
    ck.dmrg_sweeps = static_cast<int>(get_u64(is));

    const auto n_rows = get_u64(is);
    ck.rows.resize(n_rows);
    for (auto& r : ck.rows) {
        r.time = get_f64(is);
        r.half_current = get_f64(is);
        r.entropy_max = get_f64(is);
        r.discarded = get_f64(is);
        const auto len = get_u64(is);
        r.density.resize(len);
        get_f64s(is, r.density.data(), len);
    }

    if (ck.engine == "exact") {
        const auto dim = get_u64(is);
        ck.fock_amps.resize(static_cast<Eigen::Index>(dim));
        get_f64s(is, reinterpret_cast<double*>(ck.fock_amps.data()), 2 * dim);
    } else if (ck.engine == "mps") {
        const auto n_sites = get_u64(is);
        ck.mps_center = static_cast<int>(get_u64(is));
        ck.mps_discarded = get_f64(is);
        ck.mps_tensors.resize(n_sites);
        for (auto& t : ck.mps_tensors) {
            const auto dl = get_u64(is);
            const auto dr = get_u64(is);
            for (int s = 0; s < 2; ++s) {
                t[static_cast<size_t>(s)].resize(static_cast<Eigen::Index>(dl),
                                                 static_cast<Eigen::Index>(dr));
                get_f64s(is, reinterpret_cast<double*>(t[static_cast<size_t>(s)].data()),
                         2 * dl * dr);
            }
        }
    }
    if (!is) throw UsageError("checkpoint: truncated file " + path);
    return ck;
}

} // namespace hcb
