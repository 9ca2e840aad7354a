#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace horizon_probe {

/// Base of every error thrown by the library. The CLI maps the concrete
/// subclass onto an exit status.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Input data could not be ingested (bad CSV, irregular grid, ...).
class DataError : public Error {
public:
    using Error::Error;
};

class MalformedRow : public DataError {
public:
    MalformedRow(std::size_t line, const std::string& what)
        : DataError("line " + std::to_string(line) + ": " + what), line_(line) {}

    [[nodiscard]] std::size_t line() const noexcept { return line_; }

private:
    std::size_t line_;
};

class GapDetected : public DataError {
public:
    GapDetected(std::size_t line, const std::string& what)
        : DataError("line " + std::to_string(line) + ": " + what), line_(line) {}

    [[nodiscard]] std::size_t line() const noexcept { return line_; }

private:
    std::size_t line_;
};

class EmptySeries : public DataError {
public:
    using DataError::DataError;
};

class IoError : public DataError {
public:
    using DataError::DataError;
};

class SchemaMismatch : public DataError {
public:
    using DataError::DataError;
};

/// Caller supplied arguments outside an operation's domain.
class InvalidArgument : public Error {
public:
    using Error::Error;
};

class InvalidLength : public InvalidArgument {
public:
    using InvalidArgument::InvalidArgument;
};

class LengthMismatch : public InvalidArgument {
public:
    using InvalidArgument::InvalidArgument;
};

class InputMismatch : public InvalidArgument {
public:
    using InvalidArgument::InvalidArgument;
};

class HorizonTooLong : public InvalidArgument {
public:
    using InvalidArgument::InvalidArgument;
};

/// Bad command line or experiment configuration.
class ConfigError : public Error {
public:
    using Error::Error;
};

/// An optimization did not reach a usable optimum (Infeasible or NodeLimit).
class SolverFailure : public Error {
public:
    using Error::Error;
};

}  // namespace horizon_probe
