#include "hcb/fock_kernels.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

#include <algorithm>
#include <bit>
#include <cstring>

namespace hcb {

namespace {

inline int clamp_threads(int threads) {
#ifdef _OPENMP
    return std::max(1, threads);
#else
    (void)threads;
    return 1;
#endif
}

} // namespace

namespace serial {

void apply_hamiltonian(const FockBasis& basis, const ModelParams& params,
                       std::span<const Complex> in, std::span<Complex> out) {
    const std::int64_t dim = basis.dim();
    const int L = basis.sites();
    std::fill(out.begin(), out.end(), Complex(0.0, 0.0));
    for (std::int64_t a = 0; a < dim; ++a) {
        const std::uint64_t s = basis.state(a);
        const Complex amp = in[static_cast<size_t>(a)];
        out[static_cast<size_t>(a)] +=
            params.three_body * static_cast<double>(std::popcount(s & (s >> 1) & (s >> 2))) * amp;
        for (int p = 0; p + 1 < L; ++p) {
            const std::uint64_t pair = 3ULL << p;
            const std::uint64_t occ = s & pair;
            if (occ != 0 && occ != pair)
                out[static_cast<size_t>(basis.index_of(s ^ pair))] += -params.hop * amp;
        }
    }
}

std::vector<double> density(const FockBasis& basis, std::span<const Complex> amps) {
    const int L = basis.sites();
    std::vector<double> n(static_cast<size_t>(L), 0.0);
    for (std::int64_t a = 0; a < basis.dim(); ++a) {
        const double w = std::norm(amps[static_cast<size_t>(a)]);
        std::uint64_t s = basis.state(a);
        while (s) {
            n[static_cast<size_t>(std::countr_zero(s))] += w;
            s &= s - 1;
        }
    }
    return n;
}

double half_current(const FockBasis& basis, double J, std::span<const Complex> amps) {
    // <a| over bonds (i, i+1), i = L/2+1 .. L-1 (1-based sites).
    // Each directed hop contributes -iJ conj(amp_target) amp_source; the
    // conjugate move supplies the h.c. partner, so sum 2*Re over one direction.
    const int L = basis.sites();
    double total = 0.0;
    for (std::int64_t a = 0; a < basis.dim(); ++a) {
        const std::uint64_t s = basis.state(a);
        const Complex amp = amps[static_cast<size_t>(a)];
        for (int i = L / 2 + 1; i + 1 <= L; ++i) {
            const int p = i - 1;
            const std::uint64_t lo = 1ULL << p, hi = 1ULL << (p + 1);
            if ((s & hi) && !(s & lo)) { // b^dag_i b_{i+1}: move p+1 -> p
                const std::int64_t b = basis.index_of(s ^ (lo | hi));
                total += 2.0 * (Complex(0.0, -J) * std::conj(amps[static_cast<size_t>(b)]) * amp).real();
            }
        }
    }
    return total;
}

double energy_expectation(const FockBasis& basis, const ModelParams& params,
                          std::span<const Complex> amps) {
    const int L = basis.sites();
    double total = 0.0;
    for (std::int64_t a = 0; a < basis.dim(); ++a) {
        const std::uint64_t s = basis.state(a);
        const Complex amp = amps[static_cast<size_t>(a)];
        total += params.three_body * std::popcount(s & (s >> 1) & (s >> 2)) * std::norm(amp);
        for (int p = 0; p + 1 < L; ++p) {
            const std::uint64_t pair = 3ULL << p;
            const std::uint64_t occ = s & pair;
            if (occ != 0 && occ != pair) {
                const std::int64_t b = basis.index_of(s ^ pair);
                total += (-params.hop * std::conj(amps[static_cast<size_t>(b)]) * amp).real();
            }
        }
    }
    return total;
}

} // namespace serial

namespace par {

void apply_hamiltonian(const FockBasis& basis, const ModelParams& params,
                       std::span<const Complex> in, std::span<Complex> out, int threads) {
    const std::int64_t dim = basis.dim();
    const int L = basis.sites();
    const int nt = clamp_threads(threads);
    if (nt == 1) {
        // gather form even at one thread so both routes are always exercised
        for (std::int64_t a = 0; a < dim; ++a) {
            const std::uint64_t s = basis.state(a);
            Complex acc = params.three_body *
                          static_cast<double>(std::popcount(s & (s >> 1) & (s >> 2))) *
                          in[static_cast<size_t>(a)];
            for (int p = 0; p + 1 < L; ++p) {
                const std::uint64_t pair = 3ULL << p;
                const std::uint64_t occ = s & pair;
                if (occ != 0 && occ != pair)
                    acc += -params.hop * in[static_cast<size_t>(basis.index_of(s ^ pair))];
            }
            out[static_cast<size_t>(a)] = acc;
        }
        return;
    }
#ifdef _OPENMP
#pragma omp parallel for schedule(static) num_threads(nt)
    for (std::int64_t a = 0; a < dim; ++a) {
        const std::uint64_t s = basis.state(a);
        Complex acc = params.three_body *
                      static_cast<double>(std::popcount(s & (s >> 1) & (s >> 2))) *
                      in[static_cast<size_t>(a)];
        for (int p = 0; p + 1 < L; ++p) {
            const std::uint64_t pair = 3ULL << p;
            const std::uint64_t occ = s & pair;
            if (occ != 0 && occ != pair)
                acc += -params.hop * in[static_cast<size_t>(basis.index_of(s ^ pair))];
        }
        out[static_cast<size_t>(a)] = acc;
    }
#endif
}

std::vector<double> density(const FockBasis& basis, std::span<const Complex> amps, int threads) {
    const int L = basis.sites();
    const int nt = clamp_threads(threads);
    if (nt == 1) return serial::density(basis, amps);
#ifdef _OPENMP
    const std::int64_t dim = basis.dim();
    std::vector<double> partial(static_cast<size_t>(nt) * L, 0.0);
#pragma omp parallel num_threads(nt)
    {
        double* row = partial.data() + static_cast<size_t>(omp_get_thread_num()) * L;
#pragma omp for schedule(static)
        for (std::int64_t a = 0; a < dim; ++a) {
            const double w = std::norm(amps[static_cast<size_t>(a)]);
            std::uint64_t s = basis.state(a);
            while (s) {
                row[std::countr_zero(s)] += w;
                s &= s - 1;
            }
        }
    }
    // combine partials in thread order: deterministic for a fixed thread count
    std::vector<double> n(static_cast<size_t>(L), 0.0);
    for (int t = 0; t < nt; ++t)
        for (int i = 0; i < L; ++i)
            n[static_cast<size_t>(i)] += partial[static_cast<size_t>(t) * L + i];
    return n;
#else
    return serial::density(basis, amps);
#endif
}

double half_current(const FockBasis& basis, double J, std::span<const Complex> amps, int threads) {
    const int nt = clamp_threads(threads);
    if (nt == 1) return serial::half_current(basis, J, amps);
#ifdef _OPENMP
    const int L = basis.sites();
    const std::int64_t dim = basis.dim();
    std::vector<double> partial(static_cast<size_t>(nt), 0.0);
#pragma omp parallel num_threads(nt)
    {
        double acc = 0.0;
#pragma omp for schedule(static)
        for (std::int64_t a = 0; a < dim; ++a) {
            const std::uint64_t s = basis.state(a);
            const Complex amp = amps[static_cast<size_t>(a)];
            for (int i = L / 2 + 1; i + 1 <= L; ++i) {
                const int p = i - 1;
                const std::uint64_t lo = 1ULL << p, hi = 1ULL << (p + 1);
                if ((s & hi) && !(s & lo)) {
                    const std::int64_t b = basis.index_of(s ^ (lo | hi));
                    acc += 2.0 * (Complex(0.0, -J) * std::conj(amps[static_cast<size_t>(b)]) * amp).real();
                }
            }
        }
        partial[static_cast<size_t>(omp_get_thread_num())] = acc;
    }
    double total = 0.0;
    for (int t = 0; t < nt; ++t) total += partial[static_cast<size_t>(t)];
    return total;
#else
    return serial::half_current(basis, J, amps);
#endif
}

double energy_expectation(const FockBasis& basis, const ModelParams& params,
                          std::span<const Complex> amps, int threads) {
    const int nt = clamp_threads(threads);
    if (nt == 1) return serial::energy_expectation(basis, params, amps);
#ifdef _OPENMP
    const int L = basis.sites();
    const std::int64_t dim = basis.dim();
    std::vector<double> partial(static_cast<size_t>(nt), 0.0);
#pragma omp parallel num_threads(nt)
    {
        double acc = 0.0;
#pragma omp for schedule(static)
        for (std::int64_t a = 0; a < dim; ++a) {
            const std::uint64_t s = basis.state(a);
            const Complex amp = amps[static_cast<size_t>(a)];
            acc += params.three_body * std::popcount(s & (s >> 1) & (s >> 2)) * std::norm(amp);
            for (int p = 0; p + 1 < L; ++p) {
                const std::uint64_t pair = 3ULL << p;
                const std::uint64_t occ = s & pair;
                if (occ != 0 && occ != pair) {
                    const std::int64_t b = basis.index_of(s ^ pair);
                    acc += (-params.hop * std::conj(amps[static_cast<size_t>(b)]) * amp).real();
                }
            }
        }
        partial[static_cast<size_t>(omp_get_thread_num())] = acc;
    }
    double total = 0.0;
    for (int t = 0; t < nt; ++t) total += partial[static_cast<size_t>(t)];
    return total;
#else
    return serial::energy_expectation(basis, params, amps);
#endif
}

} // namespace par

} // namespace hcb
