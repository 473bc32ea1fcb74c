#pragma once

#include <stdexcept>
#include <string>

namespace hcb {

// Error taxonomy mirrors the CLI exit codes:
//   UsageError (incl. CapacityError) -> 1, IntegrityError -> 2, ConvergenceError -> 3.

struct UsageError : std::runtime_error {
    explicit UsageError(const std::string& msg) : std::runtime_error(msg) {}
};

struct CapacityError : UsageError {
    explicit CapacityError(const std::string& msg) : UsageError(msg) {}
};

// An internal invariant was violated beyond tolerance (signals an upstream bug,
// not bad user input).
struct IntegrityError : std::runtime_error {
    explicit IntegrityError(const std::string& msg) : std::runtime_error(msg) {}
};

struct ConvergenceError : std::runtime_error {
    explicit ConvergenceError(const std::string& msg) : std::runtime_error(msg) {}
};

} // namespace hcb
