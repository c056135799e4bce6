#pragma once

#include <stdexcept>
#include <string>

namespace hyprobin {

// Argument outside the mathematical domain of an operation (R <= 0, n < 2, ...).
class DomainError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

// Caller broke a structural contract (wrong vector length, inconsistent sizes).
class ContractError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

// Numerical failure inside a solver: factorization, non-convergence, blow-up.
class SolverError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class BracketError : public SolverError {
public:
    using SolverError::SolverError;
};

// Offset reached the focal distance 1 - kappa * tanh(t) <= 0.
class FocalError : public DomainError {
public:
    using DomainError::DomainError;
};

// Discretization too coarse for the requested accuracy.
class ResolutionError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class MeshError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// A theorem hypothesis (h-convexity, sign of beta) does not hold for the input.
class HypothesisError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Computed eigenfunction is not monotone although beta != 0.
class MonotonicityError : public SolverError {
public:
    using SolverError::SolverError;
};

class ConfigError : public std::runtime_error {
public:
    ConfigError(std::string field, const std::string& what)
        : std::runtime_error(field + ": " + what), field_(std::move(field)) {}

    const std::string& field() const noexcept { return field_; }

private:
    std::string field_;
};

} // namespace hyprobin
