// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 starseg contributors

#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace starseg {

/// Base class of every error thrown by this library.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& what) : std::runtime_error(what) {}
};

/// Precondition violations with no more specific category below.
class InvalidArgumentError : public Error {
public:
    using Error::Error;
};

/// Decomposition or kernel level outside the valid range, including a level
/// whose mirror padding would not fit the image. Callers that sweep levels
/// can catch this to cap the sweep; see max_decomposition_levels().
class InvalidLevelError : public Error {
public:
    using Error::Error;
};

/// Mirror padding margin larger than the image allows (reflection would run
/// off the far edge).
class PadExceedsImageError : public Error {
public:
    using Error::Error;
};

/// A decomposition does not reach the requested starting detail level.
class InsufficientLevelsError : public Error {
public:
    using Error::Error;
};

/// Two inputs that must agree in shape do not.
class InconsistentInputError : public Error {
public:
    using Error::Error;
};

/// Decomposition planes disagree in shape among themselves.
class InconsistentDecompositionError : public Error {
public:
    using Error::Error;
};

/// An operation received nothing to work on (empty sweep, all-zero counts).
class EmptyInputError : public Error {
public:
    using Error::Error;
};

/// An image with unrepresentable dimensions was handed to an encoder.
class InvalidImageError : public Error {
public:
    using Error::Error;
};

/// Non-overlapping blob placement could not be satisfied.
class PlacementFailedError : public Error {
public:
    using Error::Error;
};

/// Byte-level decoding failure. Carries the offending byte offset when the
/// decoder can point at one; npos otherwise.
class ParseError : public Error {
public:
    static constexpr std::size_t npos = static_cast<std::size_t>(-1);

    explicit ParseError(const std::string& what, std::size_t byte_offset = npos)
        : Error(byte_offset == npos ? what : what + " (byte " + std::to_string(byte_offset) + ")"),
          byte_offset_(byte_offset) {}

    std::size_t byte_offset() const { return byte_offset_; }

private:
    std::size_t byte_offset_;
};

/// Header is structurally wrong (bad magic, bad dimensions, bad maxval, ...).
class MalformedHeaderError : public ParseError {
public:
    using ParseError::ParseError;
};

/// Header parsed but the sample data ends early.
class TruncatedPayloadError : public ParseError {
public:
    using ParseError::ParseError;
};

/// Recognizable but unsupported encoding (color PNM, 16-bit PNG, ...).
class UnsupportedFormatError : public ParseError {
public:
    using ParseError::ParseError;
};

}  // namespace starseg
