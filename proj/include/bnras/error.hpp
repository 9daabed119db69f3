#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace bnras {

/// Base for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Syntax or semantic problem in a network document. Always carries a line.
class ParseError : public Error {
 public:
  ParseError(std::size_t line, std::size_t column, const std::string& message);

  std::size_t line() const noexcept { return line_; }
  std::size_t column() const noexcept { return column_; }
  const std::string& message() const noexcept { return message_; }

 private:
  std::size_t line_;
  std::size_t column_;
  std::string message_;
};

/// Structurally unusable network (cycle, unresolved parent, bad CPT shape or
/// row sum), or evidence that does not fit the network.
class ValidationError : public Error {
 public:
  using Error::Error;
};

/// An argument outside the domain of a formula, e.g. alpha not in (0, 1).
class DomainError : public Error {
 public:
  using Error::Error;
};

/// Enumeration or matrix cap exceeded, or a bound too large to represent.
class CapacityError : public Error {
 public:
  using Error::Error;
};

/// Evidence with probability zero, or a full conditional whose weights are
/// all zero. Only reachable with 0/1 CPT entries.
class ZeroProbabilityError : public Error {
 public:
  using Error::Error;
};

}  // namespace bnras
