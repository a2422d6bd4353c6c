#pragma once

#include <stdexcept>
#include <string>

namespace dco {

// Error taxonomy mirrored by CLI exit codes: input 2, capacity 3, invariant 4.
struct InputError : std::runtime_error {
    explicit InputError(const std::string& what) : std::runtime_error(what) {}
};

struct CapacityError : std::runtime_error {
    explicit CapacityError(const std::string& what) : std::runtime_error(what) {}
};

struct InvariantError : std::runtime_error {
    explicit InvariantError(const std::string& what) : std::runtime_error(what) {}
};

enum ExitCode : int {
    kExitOk = 0,
    kExitInput = 2,
    kExitCapacity = 3,
    kExitInvariant = 4,
};

}  // namespace dco
