#pragma once

#include <stdexcept>
#include <string>

namespace fcs {

// Every library failure derives from Error so callers can map categories to
// exit codes without string matching.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class ShapeError : public Error {
public:
    using Error::Error;
};

class DomainError : public Error {
public:
    using Error::Error;
};

class InvalidDensityError : public Error {
public:
    using Error::Error;
};

/// Bad user input: malformed configuration, nonlinear map, invalid projections.
class InputError : public Error {
public:
    using Error::Error;
};

class NotCpError : public Error {
public:
    using Error::Error;
};

/// A numerical procedure did not reach its residual target.
class NumericError : public Error {
public:
    using Error::Error;
};

/// Requested volume or word count exceeds the configured caps.
class ResourceError : public Error {
public:
    using Error::Error;
};

/// Group closure did not terminate below the size cap.
class SizeError : public ResourceError {
public:
    using ResourceError::ResourceError;
};

class UndefinedConditionalError : public Error {
public:
    using Error::Error;
};

}  // namespace fcs
