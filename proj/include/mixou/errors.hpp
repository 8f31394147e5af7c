#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace mixou {

/// Invalid input: bad parameter, mismatched grids, unknown format. CLI exit code 2.
class ArgumentError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Parameter combination outside the regime an operation is defined for
/// (e.g. the CLT scale at H >= 3/4, or an ergodic-only routine with theta <= 0).
class RegimeError : public ArgumentError {
public:
    using ArgumentError::ArgumentError;
};

/// Estimator undefined on the given path (e.g. CIR path absorbed at zero).
class DomainError : public ArgumentError {
public:
    using ArgumentError::ArgumentError;
};

/// Numerical breakdown: failed factorization, missing bracket, singular system. CLI exit code 3.
class NumericalError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Input that makes an estimator a 0/0 or x/0 expression.
class DegenerateInputError : public NumericalError {
public:
    using NumericalError::NumericalError;
};

/// Cholesky breakdown; carries the pivot where the factor lost positive definiteness.
class CholeskyError : public NumericalError {
public:
    CholeskyError(std::size_t index)
        : NumericalError("Cholesky factorization failed at pivot " + std::to_string(index)),
          index_(index) {}
    std::size_t index() const noexcept { return index_; }

private:
    std::size_t index_;
};

}  // namespace mixou
