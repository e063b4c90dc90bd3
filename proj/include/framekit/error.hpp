#pragma once

#include <stdexcept>
#include <string>

namespace framekit {

/// Base of every exception thrown by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Operand shapes or dimensions do not agree.
class ShapeError : public Error {
public:
    using Error::Error;
};

/// An argument lies outside the domain of an operation (non-Hermitian input,
/// translation by an element outside the subgroup, malformed group table...).
class DomainError : public Error {
public:
    using Error::Error;
};

/// A documented precondition does not hold (non-frame input, non-Riesz system).
class PreconditionError : public Error {
public:
    using Error::Error;
};

/// A requested construction is impossible for the given data
/// (rank condition violated, subspaces not in duality).
class InfeasibleError : public Error {
public:
    using Error::Error;
};

/// An iterative method did not converge or a postcondition failed numerically.
class NumericalFailure : public Error {
public:
    using Error::Error;
};

} // namespace framekit
