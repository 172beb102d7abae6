#pragma once

#include <stdexcept>
#include <string>

namespace ambigg {

/// A callback produced a non-finite value; carries the offending abscissa.
class EvaluationError : public std::runtime_error {
public:
    EvaluationError(const std::string& what, double at)
        : std::runtime_error(what + " (at " + std::to_string(at) + ")"), at_(at) {}
    double at() const { return at_; }

private:
    double at_;
};

/// A documented precondition or cross-module consistency check failed.
class ContractError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Search exhaustion, non-convergence, or loss of numerical resolution.
class NumericalError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Requested combination of inputs is outside the supported surface.
class UnsupportedError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Parameter value sits exactly on a knife edge the theory excludes.
class DegenerateCaseError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

} // namespace ambigg
