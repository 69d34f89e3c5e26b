#pragma once

#include <stdexcept>
#include <string>

namespace rfcs {

/// Base class of every error thrown by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Malformed arguments or a violated precondition (empty instance, bad flags,
/// revisiting a customer).
class ContractError : public Error {
public:
    using Error::Error;
};

/// Text that does not describe a valid instance, solution or parameter file.
class ParseError : public Error {
public:
    using Error::Error;
};

/// A solution that references nodes the instance does not have.
class StructuralError : public Error {
public:
    using Error::Error;
};

/// An exhaustive method asked to enumerate more than it is allowed to.
class RefusalError : public Error {
public:
    using Error::Error;
};

/// Numerical breakdown during training (non-finite gradient).
class NumericError : public Error {
public:
    using Error::Error;
};

}  // namespace rfcs
