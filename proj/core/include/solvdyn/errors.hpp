#pragma once

#include <stdexcept>
#include <string>

namespace solvdyn {

/// Base class for all failures raised by the solver suite.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& what) : std::runtime_error(what) {}
};

/// Initial packet does not fit inside the truncated domain; the tails would
/// touch the Dirichlet boundary and contaminate the run.
class PacketTooWide : public Error {
public:
    using Error::Error;
};

/// Requested the stationary density of free diffusion (k = 0), which is not
/// normalizable on the line.
class NoStationaryDensity : public Error {
public:
    using Error::Error;
};

/// The implicit tridiagonal system could not be solved (singular pivot);
/// signals invalid dt or coefficients.
class SolveFailure : public Error {
public:
    using Error::Error;
};

/// S(t) is undefined for epsilon0 = 0 (it divides by the initial gap).
class ZeroInitialGap : public Error {
public:
    using Error::Error;
};

/// The observable series does not cover enough of the decay to classify.
class SeriesTooShort : public Error {
public:
    using Error::Error;
};

/// The monotonic/non-monotonic boundary is not a single crossing over the
/// bisection bracket; reported instead of silently resolved.
class NonMonotoneBoundary : public Error {
public:
    using Error::Error;
};

/// PDE and Monte Carlo series were recorded on different time schedules.
class ScheduleMismatch : public Error {
public:
    using Error::Error;
};

/// A run configuration failed validation.
class ConfigError : public Error {
public:
    using Error::Error;
};

} // namespace solvdyn
