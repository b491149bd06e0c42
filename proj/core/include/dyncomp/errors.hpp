#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace dyncomp {

// Root of every error thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Malformed regressor expression. `position` is a 0-based byte offset into
// the source text.
class ParseError : public Error {
 public:
  ParseError(const std::string& message, std::size_t position)
      : Error(message + " at position " + std::to_string(position)),
        position_(position) {}

  std::size_t position() const noexcept { return position_; }

 private:
  std::size_t position_;
};

// Numerical fault while evaluating an expression (division by zero, ...).
class EvalError : public Error {
 public:
  using Error::Error;
};

// A model, graph or scenario violates a structural rule or a standing
// assumption (spanning tree, neutral stability, strict feedback, ...).
class ValidationError : public Error {
 public:
  using Error::Error;
};

// Mismatched vector or matrix dimensions between collaborating objects.
class DimensionError : public Error {
 public:
  using Error::Error;
};

// Gain synthesis could not produce a certified design.
class SynthesisError : public Error {
 public:
  using Error::Error;
};

// File-system level failure (missing file, unwritable output).
class IoError : public Error {
 public:
  using Error::Error;
};

}  // namespace dyncomp
