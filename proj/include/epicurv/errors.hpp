#pragma once

#include <stdexcept>

namespace epicurv {

// Invalid configuration or arguments (CLI exit code 1).
struct ConfigError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

// Failure of the numerical pipeline (CLI exit code 2).
struct SolverError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Curve left the admissible set: |du| fell below the immersion threshold.
struct DegenerateCurveError : SolverError {
    using SolverError::SolverError;
};

// Input to l0_invert carries first-harmonic content above tolerance.
struct NotInRangeError : SolverError {
    using SolverError::SolverError;
};

// eps must have the same sign as the leading field amplitude A.
struct WrongSignError : ConfigError {
    using ConfigError::ConfigError;
};

// lambda1 does not change sign across the rho window.
struct WindowError : SolverError {
    using SolverError::SolverError;
};

// Fixed-point iteration did not contract within max_iter.
struct NonContractionError : SolverError {
    using SolverError::SolverError;
};

}  // namespace epicurv
