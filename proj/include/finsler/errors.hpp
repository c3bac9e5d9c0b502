#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace finsler {

/// Base of every error raised by the library. The CLI maps subclasses to exit codes.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Sample outside the metric's domain, or a stencil that would leave it.
class DomainError : public Error {
 public:
  using Error::Error;
};

/// Caller passed something of the wrong kind (real sample to a complex metric, bad parameter...).
class UsageError : public Error {
 public:
  using Error::Error;
};

/// Non-finite values, differentiation at a nonsmooth point, failed symmetrization.
class NumericsError : public Error {
 public:
  using Error::Error;
};

/// Fundamental tensor not positive definite where an inverse is needed.
class SingularMetric : public NumericsError {
 public:
  using NumericsError::NumericsError;
};

/// Zoo lookup failed.
class UnknownMetric : public UsageError {
 public:
  using UsageError::UsageError;
};

// Expression language errors.

/// Offsets are 1-based: the first byte of the source is offset 1, and a
/// premature end of input reports one past the last byte.
class ParseError : public Error {
 public:
  ParseError(const std::string& what, std::size_t byte_index)
      : Error(what + " at offset " + std::to_string(byte_index + 1)), offset_(byte_index + 1) {}
  std::size_t offset() const noexcept { return offset_; }

 private:
  std::size_t offset_;
};

class SyntaxError : public ParseError {
 public:
  using ParseError::ParseError;
};

class UnknownIdentifier : public ParseError {
 public:
  using ParseError::ParseError;
};

class ArityError : public ParseError {
 public:
  using ParseError::ParseError;
};

class IndexOutOfRange : public ParseError {
 public:
  using ParseError::ParseError;
};

class EvalError : public NumericsError {
 public:
  using NumericsError::NumericsError;
};

class DivisionNearZero : public EvalError {
 public:
  using EvalError::EvalError;
};

class SqrtOfNegativeReal : public EvalError {
 public:
  using EvalError::EvalError;
};

class ResidualImaginaryPart : public EvalError {
 public:
  using EvalError::EvalError;
};

}  // namespace finsler
