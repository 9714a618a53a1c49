#pragma once

#include <stdexcept>
#include <string>

namespace fermiwork {

/// Bad call arguments: wrong sizes, invalid ranges, malformed options.
struct ArgumentError : std::invalid_argument {
  explicit ArgumentError(const std::string& what) : std::invalid_argument(what) {}
};

/// Request exceeds a hard capacity limit (e.g. dense Fock space mode count).
struct CapacityError : std::invalid_argument {
  explicit CapacityError(const std::string& what) : std::invalid_argument(what) {}
};

/// A state or matrix fails a physicality / structural invariant.
struct ValidationError : std::runtime_error {
  explicit ValidationError(const std::string& what) : std::runtime_error(what) {}
};

/// An object cannot be expressed in the requested representation
/// (e.g. a unitary whose conjugation does not preserve the Majorana span).
struct RepresentationError : std::runtime_error {
  explicit RepresentationError(const std::string& what) : std::runtime_error(what) {}
};

/// Internal numerical failure: iteration did not converge, residual too large.
struct NumericError : std::runtime_error {
  explicit NumericError(const std::string& what) : std::runtime_error(what) {}
};

/// Malformed input text (covariance files, sweep configs). Carries a line number
/// when one is known; line == 0 means "not line-addressable".
struct ParseError : std::runtime_error {
  ParseError(const std::string& what, int line_no = 0)
      : std::runtime_error(line_no > 0 ? "line " + std::to_string(line_no) + ": " + what : what),
        line(line_no) {}
  int line;
};

}  // namespace fermiwork
