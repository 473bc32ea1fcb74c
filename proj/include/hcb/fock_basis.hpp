#pragma once

#include <cstdint>
#include <vector>

namespace hcb {

// Occupation-basis conventions used everywhere:
//   site i (1-based, i = 1..L) <-> bit (i-1) of the state mask,
//   states of a fixed-N sector are listed in increasing integer order.

constexpr std::int64_t kFockDimCap = 5'000'000; // oracle role only; refuse beyond

std::uint64_t binomial(int n, int k);

class FockBasis {
public:
    FockBasis(int sites, int particles);

    int sites() const { return sites_; }
    int particles() const { return particles_; }
    std::int64_t dim() const { return static_cast<std::int64_t>(states_.size()); }
    const std::vector<std::uint64_t>& states() const { return states_; }
    std::uint64_t state(std::int64_t idx) const { return states_[static_cast<size_t>(idx)]; }

    // Combinadic rank; exact inverse of states() ordering. O(N) per call.
    std::int64_t index_of(std::uint64_t mask) const;

private:
    int sites_;
    int particles_;
    std::vector<std::uint64_t> states_;
};

FockBasis enumerate_basis(int sites, int particles);

} // namespace hcb
