#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace ecert {

// Base of every library error. The CLI maps any Error to exit code 2.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Argument outside the domain of a formula or special function.
class DomainError : public Error {
public:
    using Error::Error;
};

// Inconsistent or missing configuration (tag specs, scenario files, params).
class ConfigurationError : public Error {
public:
    using Error::Error;
};

// Exponent pair not admissible for the requested estimate.
class PreconditionError : public Error {
public:
    using Error::Error;
};

// Mixed estimate requested for a pure Neumann geometry or vice versa.
class WrongRegimeError : public Error {
public:
    using Error::Error;
};

// Level-set iteration parameters that cannot converge (beta <= 1).
class IterationDivergenceError : public Error {
public:
    using Error::Error;
};

class AssemblyError : public Error {
public:
    using Error::Error;
};

class SolverError : public Error {
public:
    SolverError(const std::string& what, std::vector<double> history)
        : Error(what), residual_history(std::move(history)) {}
    std::vector<double> residual_history;
};

class SamplingError : public Error {
public:
    using Error::Error;
};

class ResourceGuardError : public Error {
public:
    using Error::Error;
};

class InsufficientDataError : public Error {
public:
    using Error::Error;
};

// Malformed scenario or mesh file; message carries file, line and section.
class ParseError : public ConfigurationError {
public:
    using ConfigurationError::ConfigurationError;
};

} // namespace ecert
