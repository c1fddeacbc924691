#pragma once

#include <stdexcept>
#include <string>

namespace sklern {

/// Invalid argument or violated precondition.
class ArgumentError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Point left the admissible cone Gamma_k (ellipticity lost).
class DegeneracyError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Iterative solver or diagnostic could not deliver a trustworthy result.
class NumericalFailure : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Operation is not defined on the given domain (e.g. reflecting a ball).
class DomainError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

} // namespace sklern
