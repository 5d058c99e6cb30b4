#pragma once

#include <stdexcept>
#include <string>

namespace molqed {

/// Base error for all library failures.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Configuration / schema problems (bad key, bad value, missing file).
struct ConfigError : Error {
    using Error::Error;
};

/// A physically meaningful failure (trap destroyed, truncation breach,
/// level crossing). The CLI maps escalated physics conditions to exit
/// code 2 instead of 1.
struct PhysicsError : Error {
    using Error::Error;
};

/// Numerical machinery failure (no bracket, diverged iteration, ...).
struct NumericsError : Error {
    using Error::Error;
};

}  // namespace molqed
