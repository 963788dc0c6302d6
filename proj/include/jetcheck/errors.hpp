#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace jetcheck {

/// Base class for all errors raised by the library.
class Error : public std::runtime_error {
public:
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

/// Formula text could not be parsed. Carries the byte offset of the first
/// offending character and the set of tokens that would have been accepted.
class ParseError : public Error {
public:
  ParseError(const std::string& what, std::size_t offset,
             std::vector<std::string> expected)
      : Error(what + " (at offset " + std::to_string(offset) + ")"),
        offset_(offset),
        expected_(std::move(expected)) {}

  std::size_t offset() const { return offset_; }
  const std::vector<std::string>& expected() const { return expected_; }

private:
  std::size_t offset_;
  std::vector<std::string> expected_;
};

/// Numeric evaluation failed: either a variable was unbound or a
/// mathematical domain violation occurred (division by zero, ln of a
/// non-positive value, sqrt of a negative value, fractional power of a
/// negative base).
class EvalError : public Error {
public:
  enum class Kind { UnboundVariable, DomainViolation };

  EvalError(Kind kind, const std::string& what, std::string offender)
      : Error(what), kind_(kind), offender_(std::move(offender)) {}

  Kind kind() const { return kind_; }
  /// The unbound variable name, or the rendered offending sub-expression.
  const std::string& offender() const { return offender_; }

private:
  Kind kind_;
  std::string offender_;
};

/// Structural mismatch between operands (wrong dimensions, wrong variance,
/// incompatible coordinate systems).
class ShapeError : public Error {
public:
  explicit ShapeError(const std::string& what) : Error(what) {}
};

/// Model-file level problem: unresolved reference, malformed document,
/// dimensional inconsistency. Reported before any numeric work starts.
class ModelError : public Error {
public:
  explicit ModelError(const std::string& what) : Error(what) {}
};

}  // namespace jetcheck
