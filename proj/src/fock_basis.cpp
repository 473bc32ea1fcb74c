#include "hcb/fock_basis.hpp"

#include "hcb/errors.hpp"

#include <array>
#include <bit>
#include <string>

namespace hcb {

namespace {

constexpr int kMaxSites = 64;

const std::array<std::array<std::uint64_t, kMaxSites + 1>, kMaxSites + 1>& binom_table() {
    static const auto table = [] {
        std::array<std::array<std::uint64_t, kMaxSites + 1>, kMaxSites + 1> c{};
        for (int n = 0; n <= kMaxSites; ++n) {
            c[n][0] = 1;
            for (int k = 1; k <= n; ++k)
                c[n][k] = c[n - 1][k - 1] + (k <= n - 1 ? c[n - 1][k] : 0);
        }
        return c;
    }();
    return table;
}

} // namespace

std::uint64_t binomial(int n, int k) {
    if (k < 0 || k > n || n < 0 || n > kMaxSites) return 0;
    return binom_table()[n][k];
}

FockBasis::FockBasis(int sites, int particles) : sites_(sites), particles_(particles) {
    if (sites < 1 || sites > kMaxSites)
        throw UsageError("FockBasis: sites must be in [1, 64], got " + std::to_string(sites));
    if (particles < 0 || particles > sites)
        throw UsageError("FockBasis: need 0 <= N <= L, got N=" + std::to_string(particles) +
                         ", L=" + std::to_string(sites));
    const std::uint64_t dim = binomial(sites, particles);
    if (dim > static_cast<std::uint64_t>(kFockDimCap))
        throw CapacityError("FockBasis: sector dimension " + std::to_string(dim) +
                            " exceeds cap " + std::to_string(kFockDimCap) +
                            " (L=" + std::to_string(sites) + ", N=" + std::to_string(particles) + ")");

    states_.reserve(static_cast<size_t>(dim));
    if (particles == 0) {
        states_.push_back(0);
        return;
    }
    // Gosper's hack walks fixed-popcount masks in increasing order.
    std::uint64_t v = (particles == 64) ? ~0ULL : ((1ULL << particles) - 1);
    const std::uint64_t last = v << (sites - particles);
    for (;;) {
        states_.push_back(v);
        if (v == last) break;
        const std::uint64_t t = v | (v - 1);
        v = (t + 1) | (((~t & -~t) - 1) >> (std::countr_zero(v) + 1));
    }
}

std::int64_t FockBasis::index_of(std::uint64_t mask) const {
    // rank in colex order = sum_j C(p_j, j) over bit positions p_1 < p_2 < ...
    std::uint64_t rank = 0;
    int j = 0;
    std::uint64_t m = mask;
    while (m) {
        const int p = std::countr_zero(m);
        ++j;
        rank += binomial(p, j);
        m &= m - 1;
    }
    return static_cast<std::int64_t>(rank);
}

FockBasis enumerate_basis(int sites, int particles) { return FockBasis(sites, particles); }

} // namespace hcb
