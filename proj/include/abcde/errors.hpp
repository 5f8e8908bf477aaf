#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace abcde {

/// Base error carrying the name of the subsystem that raised it.
/// The CLI prints errors as "error:<module>: <message>" on a single line.
class Error : public std::runtime_error {
public:
    Error(std::string module, const std::string& message)
        : std::runtime_error("error:" + module + ": " + message), module_(std::move(module)) {}

    const std::string& module() const noexcept { return module_; }

private:
    std::string module_;
};

/// Invalid parameters or configuration (CLI exit code 2).
class ConfigError : public Error {
public:
    using Error::Error;
};

/// No admissible community placement exists for some node.
class FeasibilityError : public Error {
public:
    using Error::Error;
};

/// Rewiring failed to remove all defects within the round budget.
class ConvergenceError : public Error {
public:
    ConvergenceError(std::string module, const std::string& message, std::size_t residual_defects)
        : Error(std::move(module), message), residual_(residual_defects) {}

    std::size_t residual_defects() const noexcept { return residual_; }

private:
    std::size_t residual_;
};

/// Malformed input file.
class ParseError : public Error {
public:
    using Error::Error;
};

/// Filesystem failure.
class IoError : public Error {
public:
    using Error::Error;
};

} // namespace abcde
