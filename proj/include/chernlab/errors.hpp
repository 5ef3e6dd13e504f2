#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace chernlab {

/// Base class for all errors raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Malformed expression text; `offset` is the byte offset of the failure.
class ParseError : public Error {
public:
    ParseError(const std::string& what, std::size_t offset)
        : Error(what + " at offset " + std::to_string(offset)), offset_(offset) {}
    std::size_t offset() const noexcept { return offset_; }

private:
    std::size_t offset_;
};

/// A function evaluated outside its domain (division by zero, log of a
/// nonpositive number, ...). `offset` locates the offending expression node.
class DomainError : public Error {
public:
    DomainError(const std::string& what, std::size_t offset)
        : Error(what + " (expression offset " + std::to_string(offset) + ")"), offset_(offset) {}
    std::size_t offset() const noexcept { return offset_; }

private:
    std::size_t offset_;
};

/// A point outside the chart domain of a field or map.
class OutsideDomainError : public Error {
public:
    using Error::Error;
};

/// A metric that fails to be symmetric positive definite.
class SpdError : public Error {
public:
    using Error::Error;
};

/// Invalid arguments to a constructor or operation.
class InvalidArgument : public Error {
public:
    using Error::Error;
};

/// Configuration text problems; `line` is 1-based, 0 when not line-specific.
class ConfigError : public Error {
public:
    ConfigError(const std::string& what, int line)
        : Error(line > 0 ? "line " + std::to_string(line) + ": " + what : what), line_(line) {}
    int line() const noexcept { return line_; }

private:
    int line_;
};

}  // namespace chernlab
