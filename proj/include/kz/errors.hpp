#pragma once

#include <stdexcept>
#include <string>

namespace kz {

/// Base class for everything this library throws.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Malformed input document (syntax, schema, field type, duplicate id).
/// Messages carry a byte/line position or a field path where available.
class ParseError : public Error {
public:
    using Error::Error;
};

/// Record-level rule violation (future-dated publication, year out of range).
class ValidationError : public Error {
public:
    using Error::Error;
};

/// Numeric argument outside an operation's domain.
class DomainError : public Error {
public:
    using Error::Error;
};

/// Not enough data to compute a statistic (e.g. fewer than two positive scores).
class InsufficientDataError : public Error {
public:
    using Error::Error;
};

/// HTTP-level failure while talking to a works API.
class TransportError : public Error {
public:
    TransportError(const std::string& message, int status = 0)
        : Error(message), status_(status) {}

    /// HTTP status code, or 0 when the request never completed.
    int status() const { return status_; }

private:
    int status_;
};

} // namespace kz
