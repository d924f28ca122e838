#pragma once

#include <stdexcept>
#include <string>

namespace nrdr {

/// Base class for all library errors.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

/// Invalid argument values (bad dimensions, out-of-range parameters).
class ParameterError : public Error {
public:
    using Error::Error;
};

/// Malformed input files (CSV parse failures, wrong column counts).
class FormatError : public Error {
public:
    using Error::Error;
};

/// Neighborhood graph is disconnected where a connected one is required.
class ConnectivityError : public Error {
public:
    using Error::Error;
};

/// Numerical breakdown (singular local systems, degenerate inputs).
class NumericalError : public Error {
public:
    using Error::Error;
};

/// Iterative solver failed to reach its residual tolerance.
class ConvergenceError : public Error {
public:
    ConvergenceError(const std::string& msg, double residual)
        : Error(msg), final_residual(residual) {}
    double final_residual;
};

/// Diagnostics requested on inputs that lack the required data.
class DiagnosticError : public Error {
public:
    using Error::Error;
};

/// File system failures outside of parsing.
class IoError : public Error {
public:
    using Error::Error;
};

} // namespace nrdr
