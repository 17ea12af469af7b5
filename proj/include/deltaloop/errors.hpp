#pragma once

#include <stdexcept>
#include <string>

namespace deltaloop {

/// Base of every error raised by the library. Anything derived from
/// `ValidationError` is an input problem (bad arguments, malformed file,
/// physically inconsistent configuration); everything else is a bug.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class ValidationError : public Error {
 public:
  using Error::Error;
};

/// Angular momentum arguments outside their allowed range.
class DomainError : public ValidationError {
 public:
  using ValidationError::ValidationError;
};

/// Rotational constants violating A >= B >= C > 0, or similar numeric ranges.
class RangeError : public ValidationError {
 public:
  using ValidationError::ValidationError;
};

/// Upper level is not above the lower level.
class OrderingError : public ValidationError {
 public:
  using ValidationError::ValidationError;
};

class ZeroVectorError : public ValidationError {
 public:
  using ValidationError::ValidationError;
};

class ParseError : public ValidationError {
 public:
  ParseError(int line, const std::string& what)
      : ValidationError("line " + std::to_string(line) + ": " + what), line_(line) {}

  int line() const noexcept { return line_; }

 private:
  int line_;
};

/// A drive field is resonant with more than one level pair.
class ResonanceAmbiguity : public ValidationError {
 public:
  using ValidationError::ValidationError;
};

/// Closure residual above tolerance: the configuration leaks into H'.
class NotClosed : public ValidationError {
 public:
  NotClosed(const std::string& what, double residual)
      : ValidationError(what), residual_(residual) {}
  double residual() const noexcept { return residual_; }

 private:
  double residual_;
};

/// One of the three loop couplings vanishes: the loop is open.
class ZeroRabi : public ValidationError {
 public:
  ZeroRabi(const std::string& what, int which) : ValidationError(what), which_(which) {}
  /// 1, 2 or 3.
  int which() const noexcept { return which_; }

 private:
  int which_;
};

}  // namespace deltaloop
