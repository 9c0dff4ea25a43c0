#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace gve {

// Base of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Precondition violated by caller-supplied data or parameters.
class InvalidInput : public Error {
 public:
  using Error::Error;
};

// A column block of the design is numerically rank deficient.
class DegenerateBlock : public Error {
 public:
  DegenerateBlock(std::size_t block_index, double smallest_singular_value)
      : Error("degenerate block " + std::to_string(block_index) +
              ": smallest singular value " + std::to_string(smallest_singular_value)),
        block_index_(block_index),
        smallest_singular_value_(smallest_singular_value) {}

  std::size_t block_index() const noexcept { return block_index_; }
  double smallest_singular_value() const noexcept { return smallest_singular_value_; }

 private:
  std::size_t block_index_;
  double smallest_singular_value_;
};

// An iterative kernel hit its iteration cap.
class ConvergenceFailure : public Error {
 public:
  ConvergenceFailure(const std::string& what, double residual)
      : Error(what + " (residual " + std::to_string(residual) + ")"), residual_(residual) {}

  double residual() const noexcept { return residual_; }

 private:
  double residual_;
};

// Malformed text input. Line and column are 1-based; 0 means not applicable.
class FormatError : public Error {
 public:
  FormatError(const std::string& what, std::size_t line, std::size_t column = 0)
      : Error(describe(what, line, column)), line_(line), column_(column) {}

  std::size_t line() const noexcept { return line_; }
  std::size_t column() const noexcept { return column_; }

 private:
  static std::string describe(const std::string& what, std::size_t line, std::size_t column) {
    std::string msg = what;
    if (line != 0) {
      msg += " at line " + std::to_string(line);
      if (column != 0) msg += ", column " + std::to_string(column);
    }
    return msg;
  }

  std::size_t line_;
  std::size_t column_;
};

namespace detail {

inline void require(bool condition, const char* message) {
  if (!condition) throw InvalidInput(message);
}

inline void require(bool condition, const std::string& message) {
  if (!condition) throw InvalidInput(message);
}

}  // namespace detail
}  // namespace gve
