#pragma once

#include <stdexcept>
#include <string>

namespace hfb {

// bad input: maps to exit code 2 in the CLI
struct validation_error : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

// NaN, blow-up, non-convergence: exit code 3
struct numerical_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

}  // namespace hfb
