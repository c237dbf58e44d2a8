#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace aigrid {

enum class ErrorKind { Validation, Parse, Io, Numerical };

/// Base class for every error raised by the library. The kind decides the
/// CLI exit code (validation/parse -> 1, io -> 2, numerical -> 3).
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}
  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

class ValidationError : public Error {
 public:
  explicit ValidationError(const std::string& what) : Error(ErrorKind::Validation, what) {}
};

/// Two traces were combined but disagree on start time, dt or length.
class GridMismatchError : public ValidationError {
 public:
  explicit GridMismatchError(const std::string& what) : ValidationError("grid mismatch: " + what) {}
};

/// Malformed input text. `line` is 1-based; 0 when the error is not tied to a line.
class ParseError : public Error {
 public:
  ParseError(std::size_t line, const std::string& what)
      : Error(ErrorKind::Parse, line ? "line " + std::to_string(line) + ": " + what : what), line_(line) {}
  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

class IoError : public Error {
 public:
  explicit IoError(const std::string& what) : Error(ErrorKind::Io, what) {}
};

class NumericalError : public Error {
 public:
  explicit NumericalError(const std::string& what) : Error(ErrorKind::Numerical, what) {}
};

inline int exit_code_for(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::Validation:
    case ErrorKind::Parse:
      return 1;
    case ErrorKind::Io:
      return 2;
    case ErrorKind::Numerical:
      return 3;
  }
  return 1;
}

}  // namespace aigrid
