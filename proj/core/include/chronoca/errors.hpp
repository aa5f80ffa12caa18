#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace chronoca {

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Input data violates a mathematical or structural requirement
/// (negative count, degenerate cloud, label collision...).
class DomainError : public Error {
public:
    using Error::Error;
};

/// Malformed input text. Positions are 1-based; 0 means "not applicable".
class ParseError : public DomainError {
public:
    ParseError(const std::string& what, std::size_t line, std::size_t column);

    std::size_t line() const noexcept { return line_; }
    std::size_t column() const noexcept { return column_; }

private:
    std::size_t line_;
    std::size_t column_;
};

/// The caller broke an API precondition (index out of range, bad k...).
class UsageError : public Error {
public:
    using Error::Error;
};

/// Filesystem or stream failure.
class IoError : public Error {
public:
    using Error::Error;
};

}  // namespace chronoca
