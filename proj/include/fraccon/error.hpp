#pragma once

#include <stdexcept>
#include <string>

namespace fraccon {

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed mesh or configuration text. Carries the 1-based location.
class ParseError : public Error {
 public:
  ParseError(const std::string& what, int line, int column = 0)
      : Error(format(what, line, column)), line_(line), column_(column) {}

  int line() const { return line_; }
  int column() const { return column_; }

 private:
  static std::string format(const std::string& what, int line, int column) {
    std::string s = "line " + std::to_string(line);
    if (column > 0) s += ", column " + std::to_string(column);
    return s + ": " + what;
  }
  int line_;
  int column_;
};

/// Inconsistent mesh topology or fracture geometry.
class MeshError : public Error {
 public:
  using Error::Error;
};

/// Invalid physical or solver parameters.
class ConfigError : public Error {
 public:
  using Error::Error;
};

/// Linear or nonlinear solver failure.
class SolverError : public Error {
 public:
  using Error::Error;
};

}  // namespace fraccon
