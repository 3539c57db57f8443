#ifndef UEQ_ERRORS_HPP
#define UEQ_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace ueq {

/// Base class for all errors raised by this library.
class Error : public std::runtime_error {
public:
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

/// Grammar text could not be parsed. Carries a 1-based source position.
class ParseError : public Error {
public:
  ParseError(const std::string& what, int line, int column)
      : Error(what + " (line " + std::to_string(line) + ", column " +
              std::to_string(column) + ")"),
        line(line),
        column(column) {}
  int line;
  int column;
};

/// Two-grammar operation where the second alphabet is not a subset of the
/// first.
class AlphabetMismatch : public Error {
public:
  using Error::Error;
};

/// A word contains a symbol outside the grammar's alphabet.
class ForeignSymbol : public Error {
public:
  using Error::Error;
};

/// The requested modulus is not a prime number.
class NotPrime : public Error {
public:
  using Error::Error;
};

/// A fixed-point iteration hit its iteration cap before reaching tolerance.
class NotConverged : public Error {
public:
  using Error::Error;
};

/// A combinatorial guard (factorial table, enumeration budget) was exceeded.
class GuardExceeded : public Error {
public:
  using Error::Error;
};

}  // namespace ueq

#endif  // UEQ_ERRORS_HPP
