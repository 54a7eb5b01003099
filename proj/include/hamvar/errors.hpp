#pragma once

#include <stdexcept>
#include <string>

namespace hamvar {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// An iterative method (root finder, eigen solver, descent) ran out of iterations.
class NonConvergence : public Error {
public:
    using Error::Error;
};

/// Exponents or parameters outside the range an operation is defined for.
class InvalidExponents : public Error {
public:
    using Error::Error;
};

class DimensionMismatch : public Error {
public:
    using Error::Error;
};

/// Ball minimization pinned to the sphere of radius R0.
class BoundaryStall : public Error {
public:
    using Error::Error;
};

/// Mountain-pass path maximum fell back into the basin of the local minimum.
class Collapse : public Error {
public:
    using Error::Error;
};

/// Lower and upper barrier of a truncated problem are not strictly ordered.
class OrderViolation : public Error {
public:
    using Error::Error;
};

/// Invalid user configuration (CLI / config file).
class ConfigError : public Error {
public:
    using Error::Error;
};

}  // namespace hamvar
