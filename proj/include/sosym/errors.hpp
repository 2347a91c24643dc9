#pragma once

#include <stdexcept>
#include <string>

namespace sosym {

// Operands live in different ambient dimensions (variable counts, basis sizes).
class DimensionError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// A computation would exceed a configured size cap (grid points, group order,
// orbit sizes, solver variables).
class ResourceError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Floating-point arithmetic produced a non-finite value.
class NumericError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Input violates a structural precondition (invalid domain, non-invariant
// system, malformed witness, ...).
class InvalidInput : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Text input that does not follow the problem / polynomial grammar.
class ParseError : public std::invalid_argument {
 public:
  ParseError(const std::string& what, int line, int column)
      : std::invalid_argument(format(what, line, column)),
        line_(line),
        column_(column) {}

  int line() const { return line_; }
  int column() const { return column_; }

 private:
  static std::string format(const std::string& what, int line, int column) {
    if (line <= 0) return what;
    return "line " + std::to_string(line) + ", column " +
           std::to_string(column) + ": " + what;
  }

  int line_;
  int column_;
};

}  // namespace sosym
