#pragma once

#include <stdexcept>
#include <string>

namespace wedge {

/// Base class for every failure raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A documented precondition of an operation does not hold.
class PreconditionError : public Error {
public:
    using Error::Error;
};

/// Input data (config text, CSV, key values) could not be parsed.
class ConfigError : public Error {
public:
    using Error::Error;
};

/// A boundary law leaves the admissible slope range.
class LawRangeError : public Error {
public:
    using Error::Error;
};

/// An iterative solver stopped without meeting its tolerance.
class ConvergenceError : public Error {
public:
    using Error::Error;
};

/// The chart parametrization lost monotonicity (denominator below floor).
class ChartFoldError : public Error {
public:
    using Error::Error;
};

/// Non-finite values appeared during time stepping.
class BlowUpError : public Error {
public:
    using Error::Error;
};

}  // namespace wedge
