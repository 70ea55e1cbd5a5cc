#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace lcrn {

/// Base class of every error thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed `.crn` or `.fnspec` input. `line()` is 1-based, 0 when unknown.
class ParseError : public Error {
 public:
  ParseError(const std::string& what, std::size_t line = 0, std::size_t column = 0)
      : Error(line == 0 ? what
                        : "line " + std::to_string(line) +
                              (column == 0 ? "" : ":" + std::to_string(column)) + ": " +
                              what),
        line_(line),
        column_(column) {}

  std::size_t line() const noexcept { return line_; }
  std::size_t column() const noexcept { return column_; }

 private:
  std::size_t line_;
  std::size_t column_;
};

class NotApplicableError : public Error {
 public:
  using Error::Error;
};

/// A species count left the range of a 64-bit unsigned integer.
class CountOverflowError : public Error {
 public:
  using Error::Error;
};

/// An SSA step was requested in a configuration with total propensity 0.
class QuiescentError : public Error {
 public:
  using Error::Error;
};

/// A reachable configuration exceeded the declared linear mass bound.
class MassBoundError : public Error {
 public:
  using Error::Error;
};

/// An input lies outside an affine piece's domain of definition.
class DomainError : public Error {
 public:
  using Error::Error;
};

/// No piece of a semilinear function spec covers an input.
class CoverageError : public Error {
 public:
  using Error::Error;
};

/// Structurally invalid data: arity mismatch, bad denominators, unknown species.
class ValidationError : public Error {
 public:
  using Error::Error;
};

/// Different maximal executions of a fragment produced different outputs.
class NondeterministicOutputError : public Error {
 public:
  using Error::Error;
};

/// Output-stability classification was asked of a graph that hit its node budget.
class CappedGraphError : public Error {
 public:
  using Error::Error;
};

/// Decision-mode checking of a CRN without a yes-voter set.
class MissingVotersError : public Error {
 public:
  using Error::Error;
};

/// A benchmark trial stabilized at an output that disagrees with the oracle.
class IncorrectOutputError : public Error {
 public:
  using Error::Error;
};

}  // namespace lcrn
