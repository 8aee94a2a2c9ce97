#pragma once

#include <stdexcept>
#include <string>

namespace magband {

// Invalid parameters, grids, or configuration values.  Maps to CLI exit code 2
// when raised while parsing a run configuration.
struct InvalidInput : std::invalid_argument {
    explicit InvalidInput(const std::string& what) : std::invalid_argument(what) {}
};

// A numerical routine failed to meet its contract (no convergence, inertia
// breakdown, fit refusal).  Maps to CLI exit code 3.
struct NumericalFailure : std::runtime_error {
    explicit NumericalFailure(const std::string& what) : std::runtime_error(what) {}
};

} // namespace magband
