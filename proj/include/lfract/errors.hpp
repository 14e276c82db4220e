#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace lfract {

// Base class for everything this library throws on purpose.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Argument outside the mathematical domain of an operation.
class DomainError : public Error {
public:
    using Error::Error;
};

// Arithmetic between fractal numbers with different exponent contexts.
class CompositionError : public Error {
public:
    using Error::Error;
};

// The selected backend cannot represent the requested integrand.
class CapabilityError : public Error {
public:
    using Error::Error;
};

// Invalid run/grid/backend configuration.
class ConfigError : public Error {
public:
    using Error::Error;
};

// Syntax error with byte offset and a description of what was expected.
class ParseError : public Error {
public:
    ParseError(const std::string& message, std::size_t offset, std::string expected)
        : Error(message + " at offset " + std::to_string(offset)),
          offset_(offset),
          expected_(std::move(expected)) {}

    std::size_t offset() const { return offset_; }
    const std::string& expected() const { return expected_; }

private:
    std::size_t offset_;
    std::string expected_;
};

} // namespace lfract
