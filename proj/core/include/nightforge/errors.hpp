#pragma once

#include <stdexcept>
#include <string>

namespace nightforge {

/// Base class for all nightforge errors.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

/// Image dimensions/channel counts do not match what an operation requires.
class ShapeError : public Error {
public:
    using Error::Error;
};

/// A numeric parameter is outside its admissible range.
class ParamError : public Error {
public:
    using Error::Error;
};

/// Pixel values violate the declared range contract (e.g. encoding an
/// image whose linear_range flag is false).
class RangeError : public Error {
public:
    using Error::Error;
};

/// Malformed or unsupported input stream (PNG codec).
class DecodeError : public Error {
public:
    using Error::Error;
};

/// Annotation/manifest/detection-file ingestion failure.
class IngestError : public Error {
public:
    using Error::Error;
};

/// Configuration file or schema violation.
class ConfigError : public Error {
public:
    using Error::Error;
};

/// Non-finite value encountered in an optimization or loss evaluation.
class NumericError : public Error {
public:
    using Error::Error;
};

/// API misuse (e.g. mixed model ids in a single-model operation).
class UsageError : public Error {
public:
    using Error::Error;
};

}  // namespace nightforge
