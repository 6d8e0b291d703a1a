#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace benchkit {

/// Base of every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Caller passed an argument outside the operation's domain (K < 2, alpha outside (0,1), ...).
class InvalidArgument : public Error {
public:
    using Error::Error;
};

/// Input text could not be parsed. `line()` is 1-based, 0 when unknown.
class ParseError : public Error {
public:
    ParseError(const std::string& what, std::size_t line = 0)
        : Error(line == 0 ? what : "line " + std::to_string(line) + ": " + what), line_(line) {}

    /// Formats as "source:line:column: what".
    ParseError(const std::string& source, std::size_t line, std::size_t column, const std::string& what)
        : Error(source + ":" + std::to_string(line) + ":" + std::to_string(column) + ": " + what), line_(line) {}

    std::size_t line() const noexcept { return line_; }

private:
    std::size_t line_;
};

/// Input parsed but violates a data invariant (duplicate ids, unknown labels, ...).
class ValidationError : public Error {
public:
    using Error::Error;
};

class IoError : public Error {
public:
    using Error::Error;
};

}  // namespace benchkit
