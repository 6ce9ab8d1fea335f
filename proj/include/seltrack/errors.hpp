#pragma once

#include <stdexcept>
#include <string>

namespace seltrack {

/// Base class for all seltrack errors.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& what) : std::runtime_error(what) {}
};

/// Inputs outside a function's domain: coincident points, zero vectors, empty lists.
class DegenerateInputError : public Error {
public:
    using Error::Error;
};

/// Satellite geometry whose normal matrix is singular or numerically unusable.
class DegenerateGeometryError : public Error {
public:
    using Error::Error;
};

/// Fewer measurements than unknowns.
class InsufficientMeasurementsError : public Error {
public:
    using Error::Error;
};

/// Operating point outside the model's validity range (N < 1, f outside [1, 10]).
class InvalidOperatingPointError : public Error {
public:
    using Error::Error;
};

/// Invalid scenario, policy, or model configuration.
class ConfigError : public Error {
public:
    using Error::Error;
};

/// Malformed scenario/profile/policy file.
class ParseError : public Error {
public:
    using Error::Error;
};

/// A simulation run that produced no position fix at all.
class RunFailedError : public Error {
public:
    using Error::Error;
};

}  // namespace seltrack
