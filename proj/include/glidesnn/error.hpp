#pragma once

#include <stdexcept>
#include <string>

namespace glidesnn {

/// Base class for every error raised by the simulator.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Input outside the mathematical domain of an operation (e.g. range <= 0).
class DomainError : public Error {
public:
    using Error::Error;
};

/// Invalid or inconsistent configuration value.
class ConfigError : public Error {
public:
    using Error::Error;
};

/// Integration produced a non-finite value.
class NumericError : public Error {
public:
    using Error::Error;
};

/// Index or dimension mismatch between containers.
class StructuralError : public Error {
public:
    using Error::Error;
};

/// File system failure; the message carries the offending path.
class IoError : public Error {
public:
    using Error::Error;
};

}  // namespace glidesnn
