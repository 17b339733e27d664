// SPDX-License-Identifier: Apache-2.0
#ifndef VECWAVE_ERROR_HPP
#define VECWAVE_ERROR_HPP

#include <stdexcept>
#include <string>

namespace vecwave {

/// Base of every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Argument outside its documented domain (filter order, family selector, ...).
class ParameterError : public Error {
public:
    using Error::Error;
};

/// Grid resolution too coarse for the requested scale, or mismatched steps.
class ResolutionError : public Error {
public:
    using Error::Error;
};

/// Channel count, spatial dimension or matrix shape mismatch.
class DimensionError : public Error {
public:
    using Error::Error;
};

/// Enumeration or dense sampling guard exceeded.
class SizeError : public Error {
public:
    using Error::Error;
};

class NotOrthonormalError : public Error {
public:
    using Error::Error;
};

/// Signal length is not a power of two or levels exceed log2(N).
class ShapeError : public Error {
public:
    using Error::Error;
};

/// Decomposition whose payload disagrees with its regrouping map.
class CorruptionError : public Error {
public:
    using Error::Error;
};

/// Malformed file header or manifest.
class FormatError : public Error {
public:
    using Error::Error;
};

/// A checked algebraic identity failed to hold within its tolerance.
class InvariantError : public Error {
public:
    using Error::Error;
};

/// Requested feature is not supported (e.g. plotting d = 3).
class FeatureError : public Error {
public:
    using Error::Error;
};

} // namespace vecwave

#endif // VECWAVE_ERROR_HPP
