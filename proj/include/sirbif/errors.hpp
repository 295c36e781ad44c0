#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace sirbif {

// Malformed or non-finite input values.
class InvalidInput : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

// Parameters outside the domain where an operation is meaningful.
class DomainError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

// An operation was called without its precondition holding.
class PreconditionError : public std::logic_error {
public:
    using std::logic_error::logic_error;
};

// A closed-form denominator vanished (|den| < 1e-13).
class SingularityError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// A numeric reduction or fit could not be trusted.
class OracleFailure : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// A homological denominator mu^j conj(mu)^k - mu came too close to zero.
class SmallDivisorError : public std::runtime_error {
public:
    SmallDivisorError(const std::string& what, int j, int k)
        : std::runtime_error(what), j_(j), k_(k) {}
    int j() const noexcept { return j_; }
    int k() const noexcept { return k_; }

private:
    int j_;
    int k_;
};

// An orbit produced a NaN state.
class NumericalBlowup : public std::runtime_error {
public:
    NumericalBlowup(const std::string& what, std::size_t step)
        : std::runtime_error(what), step_(step) {}
    std::size_t step() const noexcept { return step_; }

private:
    std::size_t step_;
};

// Continuation could not proceed (step floor reached).
class ContinuationError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Returns num/den, throwing SingularityError when |den| < 1e-13.
double guarded_div(double num, double den, const char* what);

}  // namespace sirbif
