#pragma once

#include <stdexcept>
#include <string>

namespace squarec {

/// Base class for all errors raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Malformed input file or text (bad header, truncated payload, bad plan line).
class ParseError : public Error {
public:
    using Error::Error;
};

/// Input that parses but violates a domain invariant (empty mask, disconnected union, ...).
class DataError : public Error {
public:
    using Error::Error;
};

class IoError : public Error {
public:
    using Error::Error;
};

}  // namespace squarec
