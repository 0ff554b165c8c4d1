#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace hfusion {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Operand dimensions do not fit the operation.
class ShapeError : public Error {
public:
    using Error::Error;
};

/// A configuration value is outside its allowed range.
class ConfigError : public Error {
public:
    using Error::Error;
};

/// An index (class label, target) is out of range.
class IndexError : public Error {
public:
    using Error::Error;
};

/// A computation produced or received a non-finite value.
class NumericError : public Error {
public:
    using Error::Error;
};

/// Stratified splitting cannot satisfy its preconditions.
class SplitError : public Error {
public:
    using Error::Error;
};

/// A file does not conform to its on-disk layout. `offset` is the byte
/// (binary files) or line number (text files) where the problem was found.
class FormatError : public Error {
public:
    FormatError(const std::string& what, std::uint64_t offset)
        : Error(what + " (at offset " + std::to_string(offset) + ")"), offset_(offset) {}

    std::uint64_t offset() const noexcept { return offset_; }

private:
    std::uint64_t offset_;
};

/// Filesystem-level failure (missing file, unwritable path).
class IoError : public Error {
public:
    using Error::Error;
};

}  // namespace hfusion
