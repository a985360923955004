#pragma once

#include <stdexcept>
#include <string>

namespace mtcav {

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Bad parameters, malformed config keys, unknown keys.
struct ConfigError : Error {
    using Error::Error;
};

// SI unit/dimension violations; message names the offending expression.
struct DimensionError : ConfigError {
    using ConfigError::ConfigError;
};

// Integrator, root-finder and steady-state failures.
struct SolverError : Error {
    using Error::Error;
};

// A state broke its invariant envelope (trace, hermiticity, positivity).
struct StateError : SolverError {
    using SolverError::SolverError;
};

} // namespace mtcav
