#pragma once

#include <stdexcept>
#include <string>

namespace qdpc {

/// Base of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A formula was evaluated outside its mathematical domain.
class DomainError : public Error {
 public:
  using Error::Error;
};

class InvalidGeometry : public Error {
 public:
  using Error::Error;
};

/// The electron energy of the dark level falls below the conduction band minimum.
class DegenerateGeometry : public Error {
 public:
  using Error::Error;
};

class InvalidParams : public Error {
 public:
  using Error::Error;
};

class QuadratureFailure : public Error {
 public:
  using Error::Error;
};

class SingularMatrix : public Error {
 public:
  using Error::Error;
};

class StepSizeUnderflow : public Error {
 public:
  using Error::Error;
};

class NewtonDivergence : public Error {
 public:
  using Error::Error;
};

/// The generator has more than one closed communicating class, so its
/// stationary distribution is not unique.
class DegenerateKernel : public Error {
 public:
  using Error::Error;
};

// Line 0 marks a setting that did not come from a file, such as --set.
class ParseError : public Error {
 public:
  ParseError(int line, std::string key, const std::string& what)
      : Error(location(line, key) + ": " + what),
        line_(line),
        key_(std::move(key)) {}

  int line() const noexcept { return line_; }
  const std::string& key() const noexcept { return key_; }

 private:
  static std::string location(int line, const std::string& key) {
    if (line <= 0) return key.empty() ? "setting" : key;
    return "line " + std::to_string(line) + (key.empty() ? "" : " (" + key + ")");
  }

  int line_;
  std::string key_;
};

class UnknownKey : public ParseError {
 public:
  UnknownKey(int line, std::string key)
      : ParseError(line, key, "unknown key") {}
};

/// A dimensioned key was given without (or with the wrong) unit suffix.
class UnitMismatch : public ParseError {
 public:
  UnitMismatch(int line, std::string key, const std::string& expected)
      : ParseError(line, key, "missing or wrong unit suffix, expected '" + expected + "'") {}
};

}  // namespace qdpc
