#pragma once

#include <stdexcept>
#include <string>

namespace jumpfbst {

// Error categories map one-to-one onto the C API status codes and the CLI
// exit codes (argument/domain -> 1, data -> 2, estimation/degenerate -> 3).
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class ArgumentError : public Error {
public:
    using Error::Error;
};

// Non-finite inputs or parameter points violating their invariants.
class DomainError : public ArgumentError {
public:
    using ArgumentError::ArgumentError;
};

class DataError : public Error {
public:
    using Error::Error;
};

class EstimationError : public Error {
public:
    using Error::Error;
};

// All observations equal: the supremum on the null set diverges as sigma -> 0.
class DegenerateDataError : public EstimationError {
public:
    using EstimationError::EstimationError;
};

// Zero marginal exceedance: the expected waiting time is unbounded.
class OverflowError : public EstimationError {
public:
    using EstimationError::EstimationError;
};

}  // namespace jumpfbst
