#pragma once

#include <stdexcept>
#include <string>

namespace fsitm {

/// Base class for every error raised by this library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// --- file decoding ---

/// Magic bytes or header structure of an image file are wrong.
class MalformedHeader : public Error {
public:
    using Error::Error;
};

/// File ends before the payload promised by its header.
class TruncatedPayload : public Error {
public:
    using Error::Error;
};

/// File format is recognized but not supported (or not recognized at all).
class UnsupportedFormat : public Error {
public:
    using Error::Error;
};

/// PNG with a bit depth other than 8.
class UnsupportedBitDepth : public Error {
public:
    using Error::Error;
};

/// File could not be opened, read, or written.
class IoError : public Error {
public:
    using Error::Error;
};

// --- domain validation ---

/// Image or plane data violates a type invariant (size, finiteness, range).
class InvalidImage : public Error {
public:
    using Error::Error;
};

/// Two rasters that must share dimensions do not.
class DimensionMismatch : public Error {
public:
    using Error::Error;
};

/// A plane has no positive sample, so the log-compression guard is undefined.
class AllZeroPlane : public Error {
public:
    using Error::Error;
};

/// Largest filter wavelength exceeds the image's smaller dimension.
class BankTooLarge : public Error {
public:
    using Error::Error;
};

/// A parameter value is outside its documented domain.
class InvalidArgument : public Error {
public:
    using Error::Error;
};

/// Score combination input outside [0, 1].
class OutOfRangeInput : public Error {
public:
    using Error::Error;
};

/// Correlation inputs have different lengths or fewer than 3 elements.
class LengthMismatch : public Error {
public:
    using Error::Error;
};

/// Correlation input is constant, so rank correlation is undefined.
class DegenerateInput : public Error {
public:
    using Error::Error;
};

/// Posterization level would leave fewer than 2 quantization levels.
class LevelTooHigh : public Error {
public:
    using Error::Error;
};

/// Manifest CSV could not be parsed.
class ManifestError : public Error {
public:
    using Error::Error;
};

} // namespace fsitm
