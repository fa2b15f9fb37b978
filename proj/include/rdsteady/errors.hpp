#pragma once

#include <stdexcept>
#include <string>

namespace rdsteady {

/// Base class for all library errors.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

/// Invalid argument values (nonpositive abscissae, unsupported derivative order, ...).
class DomainError : public Error {
    using Error::Error;
};

/// A sign-change search exhausted its geometric expansion budget.
class BracketError : public Error {
    using Error::Error;
};

/// A computed quantity exceeded the representable guard threshold.
class OverflowError : public Error {
    using Error::Error;
};

/// An iteration diverged or ran out of its budget.
class ConvergenceError : public Error {
    using Error::Error;
};

/// A linear solve hit a vanishing pivot.
class SingularMatrixError : public Error {
    using Error::Error;
};

/// Continuation schedule construction or tracking failed.
class ScheduleError : public Error {
    using Error::Error;
};

/// Bad run configuration (flags, config files, solver configs).
class ConfigError : public Error {
    using Error::Error;
};

/// A nonlinearity pair failed its hypothesis checks.
class ValidationError : public Error {
    using Error::Error;
};

/// File I/O failure.
class IoError : public Error {
    using Error::Error;
};

} // namespace rdsteady
