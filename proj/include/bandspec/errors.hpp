#pragma once

#include <stdexcept>
#include <string>

namespace bandspec {

// An iterative numeric routine failed to reach its tolerance.
// Maps to CLI exit code 3.
class ConvergenceError : public std::runtime_error {
public:
    explicit ConvergenceError(const std::string& what, double residual = 0.0)
        : std::runtime_error(what), residual_(residual) {}
    double residual() const noexcept { return residual_; }

private:
    double residual_;
};

// A mathematical invariant that should hold by construction was violated
// (e.g. a Nevanlinna bound on a solver iterate). Indicates a bug or an
// input far outside the supported regime; never silently ignored.
class InvariantViolation : public std::logic_error {
public:
    using std::logic_error::logic_error;
};

// Bad configuration file or CLI arguments. Maps to CLI exit code 2.
class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Filesystem failure, carries the offending path. Maps to CLI exit code 4.
class IoError : public std::runtime_error {
public:
    IoError(const std::string& what, const std::string& path)
        : std::runtime_error(what + ": " + path), path_(path) {}
    const std::string& path() const noexcept { return path_; }

private:
    std::string path_;
};

}  // namespace bandspec
