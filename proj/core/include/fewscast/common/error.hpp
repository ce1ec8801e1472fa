#pragma once

#include <stdexcept>
#include <string>

namespace fewscast {

/// Failure category. The numeric values double as process exit codes.
enum class ErrorKind : int {
    Config = 1,     ///< invalid configuration or arguments
    Data = 2,       ///< malformed, missing or inconsistent input data
    Numerical = 3,  ///< estimation failure (rank deficiency, non-convergence, ...)
};

class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}

    [[nodiscard]] ErrorKind kind() const noexcept { return kind_; }
    [[nodiscard]] int exit_code() const noexcept { return static_cast<int>(kind_); }

private:
    ErrorKind kind_;
};

class ConfigError : public Error {
public:
    explicit ConfigError(const std::string& what) : Error(ErrorKind::Config, what) {}
};

class DataError : public Error {
public:
    explicit DataError(const std::string& what) : Error(ErrorKind::Data, what) {}
};

class NumericalError : public Error {
public:
    explicit NumericalError(const std::string& what) : Error(ErrorKind::Numerical, what) {}
};

}  // namespace fewscast
