#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace vqr {

// Base for every error raised by the library. The message is a single line
// so the CLI can print it verbatim as a machine-parsable record.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Malformed input row. line and column are 1-based; column 0 means the
// whole row is at fault.
class ParseError : public Error {
 public:
  ParseError(std::string file, std::size_t line, std::size_t column, const std::string& what)
      : Error(file + ":" + std::to_string(line) + ":" + std::to_string(column) + ": " + what),
        file_(std::move(file)),
        line_(line),
        column_(column) {}

  const std::string& file() const noexcept { return file_; }
  std::size_t line() const noexcept { return line_; }
  std::size_t column() const noexcept { return column_; }

 private:
  std::string file_;
  std::size_t line_;
  std::size_t column_;
};

// Cross-collection inconsistency: dangling reference, duplicate key,
// non-monotone citation history, year outside the window.
class IntegrityError : public Error {
 public:
  using Error::Error;
};

// A percentile whose comparison set is empty (stratum holds only the target).
class UndefinedPercentile : public Error {
 public:
  using Error::Error;
};

class ConfigError : public Error {
 public:
  using Error::Error;
};

}  // namespace vqr
