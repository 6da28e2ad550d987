#pragma once

#include <stdexcept>

namespace sct {

// Invalid shapes, ranks, budgets, or argument domains.
struct ValidationError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

// File and serialization failures.
struct IoError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

}  // namespace sct
