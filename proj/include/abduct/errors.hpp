#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace abduct {

// Base class for all library errors.
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& what_arg) : std::runtime_error(what_arg) {}
};

// Malformed input text. Position is the 1-based line/column of the offending token.
class ParseError : public Error {
 public:
  ParseError(const std::string& msg, std::size_t line, std::size_t column)
      : Error(msg + " (line " + std::to_string(line) + ", column " + std::to_string(column) + ")"),
        line_(line),
        column_(column) {}

  std::size_t line() const { return line_; }
  std::size_t column() const { return column_; }

 private:
  std::size_t line_;
  std::size_t column_;
};

// Structurally valid input that violates the grammar restrictions of its dialect.
class DialectError : public Error {
  using Error::Error;
};

// Input outside an operation's stated precondition, e.g. a consistent KB handed
// to an abduction problem constructor.
class ValidationError : public Error {
  using Error::Error;
};

// The TBox alone is unsatisfiable; conflicts and repairs are undefined.
class IncoherentTboxError : public ValidationError {
  using ValidationError::ValidationError;
};

// A configured resource cap would be exceeded. Raised before producing partial
// answers; results are never silently truncated.
class BudgetError : public Error {
  using Error::Error;
};

// Two supposedly equivalent internal computations disagreed.
class InternalError : public Error {
  using Error::Error;
};

}  // namespace abduct
