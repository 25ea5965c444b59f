#pragma once

#include <stdexcept>
#include <string>

namespace sfs {

/// Input outside the mathematical domain of an operation (negative radius,
/// hemisphere violation, bad axis index, ...).
class DomainError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

/// A requested volume cannot be realised by a ball/annulus in the given form.
class UnattainableVolumeError : public DomainError {
public:
    using DomainError::DomainError;
};

/// Numerical routine failed to reach its stopping criterion.
class ConvergenceError : public std::runtime_error {
public:
    ConvergenceError(const std::string& what, double residual)
        : std::runtime_error(what), residual_(residual) {}

    double residual() const noexcept { return residual_; }

private:
    double residual_;
};

/// Malformed input files / JSON documents.
class InputError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

}  // namespace sfs
