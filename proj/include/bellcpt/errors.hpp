#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace bellcpt {

class Error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// Malformed text input. Line and column are 1-based; 0 means unknown.
class ParseError : public Error {
public:
  ParseError(const std::string& what, std::size_t line = 0, std::size_t column = 0)
      : Error(format(what, line, column)), message_(what), line_(line), column_(column) {}

  /// Message without the position prefix.
  const std::string& message() const noexcept { return message_; }

  std::size_t line() const noexcept { return line_; }
  std::size_t column() const noexcept { return column_; }

private:
  static std::string format(const std::string& what, std::size_t line, std::size_t column) {
    if (line == 0) return what;
    std::string s = "line " + std::to_string(line);
    if (column != 0) s += ", column " + std::to_string(column);
    return s + ": " + what;
  }

  std::string message_;
  std::size_t line_;
  std::size_t column_;
};

/// A configured size or work limit was hit. Results are never truncated silently.
class ResourceCapError : public Error {
public:
  using Error::Error;
};

/// Input data violates a documented invariant (invalid inequality, not a facet, ...).
class InvariantError : public Error {
public:
  using Error::Error;
};

/// Zero vector or other degenerate input where a nonzero object is required.
class DegenerateInputError : public Error {
public:
  using Error::Error;
};

}  // namespace bellcpt
