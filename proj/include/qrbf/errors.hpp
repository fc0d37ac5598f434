#pragma once

#include <stdexcept>
#include <string>

namespace qrbf {

/// Base class for all errors raised by this library.
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

/// Operand shapes are incompatible (row/column counts, vector lengths).
class DimensionMismatchError : public Error {
 public:
  explicit DimensionMismatchError(const std::string& what) : Error(what) {}
};

/// A linear system has no unique solution. For RBF fitting this usually
/// means two pose keys coincide.
class SingularMatrixError : public Error {
 public:
  explicit SingularMatrixError(const std::string& what) : Error(what) {}
};

/// A scalar argument lies outside its documented domain.
class ParameterOutOfRangeError : public Error {
 public:
  explicit ParameterOutOfRangeError(const std::string& what) : Error(what) {}
};

/// Slerp endpoints are a half-turn apart; the geodesic between them is
/// not unique.
class AntipodalInputsError : public Error {
 public:
  explicit AntipodalInputsError(const std::string& what) : Error(what) {}
};

/// Axis extraction was asked for a rotation that is (numerically) the
/// identity, which has no well-defined axis.
class IdentityRotationError : public Error {
 public:
  explicit IdentityRotationError(const std::string& what) : Error(what) {}
};

/// Paired sequences (weights and quaternions) differ in length.
class LengthMismatchError : public Error {
 public:
  explicit LengthMismatchError(const std::string& what) : Error(what) {}
};

/// A pose-set or solver file failed to parse or validate.
class ParseError : public Error {
 public:
  explicit ParseError(const std::string& what) : Error(what) {}
};

}  // namespace qrbf
