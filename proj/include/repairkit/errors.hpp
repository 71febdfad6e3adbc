#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace repairkit {

class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Arity mismatches, out-of-range positions, unknown relations in a context
/// that requires them.
class SchemaError : public Error {
public:
    using Error::Error;
};

/// Raised when a constraint set is used where a primary-key set is required
/// but declares more than one key for some relation.
class NotPrimaryKeySetError : public Error {
public:
    using Error::Error;
};

/// A brute-force routine or the counting DP refused an input that is too big.
class SizeGuardError : public Error {
public:
    using Error::Error;
};

class PreconditionError : public Error {
public:
    using Error::Error;
};

class ParseError : public Error {
public:
    ParseError(std::string file, std::size_t line, std::size_t column, std::string message)
        : Error(format(file, line, column, message)),
          file_(std::move(file)),
          line_(line),
          column_(column),
          message_(std::move(message)) {}

    const std::string& file() const noexcept { return file_; }
    std::size_t line() const noexcept { return line_; }
    std::size_t column() const noexcept { return column_; }
    const std::string& message() const noexcept { return message_; }

private:
    static std::string format(const std::string& file, std::size_t line, std::size_t column,
                              const std::string& message) {
        return (file.empty() ? std::string("<input>") : file) + ":" + std::to_string(line) + ":" +
               std::to_string(column) + ": " + message;
    }

    std::string file_;
    std::size_t line_;
    std::size_t column_;
    std::string message_;
};

}  // namespace repairkit
