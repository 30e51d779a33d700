#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <string_view>

namespace samgsr {

/// Base of every error raised by the library. `kind()` is the stable,
/// machine-readable category written into CLI error records.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
  virtual std::string_view kind() const noexcept { return "error"; }
};

/// Inputs that violate an operation's preconditions.
class InvalidInput : public Error {
 public:
  using Error::Error;
  std::string_view kind() const noexcept override { return "invalid_input"; }
};

/// Inconsistent or out-of-range run configuration.
class ConfigError : public Error {
 public:
  using Error::Error;
  std::string_view kind() const noexcept override { return "config"; }
};

/// Malformed file content. Line and column are 1-based; 0 means "not applicable".
class ParseError : public Error {
 public:
  ParseError(std::string path, std::size_t line, std::size_t column, const std::string& what);

  const std::string& path() const noexcept { return path_; }
  std::size_t line() const noexcept { return line_; }
  std::size_t column() const noexcept { return column_; }
  std::string_view kind() const noexcept override { return "parse"; }

 private:
  std::string path_;
  std::size_t line_;
  std::size_t column_;
};

}  // namespace samgsr
