#pragma once

#include <stdexcept>
#include <string>

namespace flightpath {

// Base class for every error thrown by this library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// An argument violates an operation's stated domain (bad sizes, angles out
// of range, degenerate input sets).
class DomainError : public Error {
public:
    using Error::Error;
};

// A parsed field value is syntactically fine but outside its allowed range.
class ValidationError : public Error {
public:
    using Error::Error;
};

// Malformed input text; message carries the offending line or key.
class ParseError : public Error {
public:
    using Error::Error;
};

// Iterative method failed to converge or a linear system is singular.
class NumericError : public Error {
public:
    using Error::Error;
};

// A lookup time lies outside an animation path's key range.
class RangeError : public Error {
public:
    using Error::Error;
};

// An operation was invoked on a state that cannot satisfy it yet.
class StateError : public Error {
public:
    using Error::Error;
};

// A point cannot be projected (at or behind the eye plane).
class ProjectionError : public Error {
public:
    using Error::Error;
};

// Input is valid but deliberately unsupported (e.g. antimeridian flights).
class UnsupportedInputError : public Error {
public:
    using Error::Error;
};

} // namespace flightpath
