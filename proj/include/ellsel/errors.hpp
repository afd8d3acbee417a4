#pragma once

#include <stdexcept>
#include <string>

namespace ellsel {

/// Base class of every error thrown by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Argument outside the domain of a function (z = 0, |p| >= 1, bad lengths).
class DomainError : public Error {
public:
    using Error::Error;
};

/// Evaluation too close to a pole of a meromorphic factor.
class PoleError : public Error {
public:
    using Error::Error;
};

/// Least-squares system for binomial coefficients badly conditioned.
class ConditioningError : public Error {
public:
    using Error::Error;
};

/// Quadrature grid exceeds the evaluation budget.
class BudgetError : public Error {
public:
    using Error::Error;
};

/// Non-finite value where a finite one was required (integrand samples).
class NumericError : public Error {
public:
    using Error::Error;
};

/// Unit-circle contour does not separate the pole sequences as required.
class ContourError : public Error {
public:
    using Error::Error;
};

/// Parameters violating a balancing condition.
class BalancingError : public Error {
public:
    using Error::Error;
};

/// Bad command line or configuration file.
class ConfigError : public Error {
public:
    using Error::Error;
};

} // namespace ellsel
