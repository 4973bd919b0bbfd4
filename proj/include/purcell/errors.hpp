#pragma once

#include <stdexcept>
#include <string>

namespace purcell {

/// Invalid or inconsistent run configuration. CLI exit code 1.
class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Numerical failure: non-convergence, instability, degenerate spectra. CLI exit code 2.
class NumericalError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// File system failure. CLI exit code 3.
class IoError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class ConvergenceError : public NumericalError {
public:
    ConvergenceError(const std::string& what, double residual)
        : NumericalError(what), residual_(residual) {}

    double residual() const noexcept { return residual_; }

private:
    double residual_;
};

class InstabilityError : public NumericalError {
public:
    InstabilityError(const std::string& what, long step)
        : NumericalError(what), step_(step) {}

    long step() const noexcept { return step_; }

private:
    long step_;
};

} // namespace purcell
