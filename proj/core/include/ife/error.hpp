#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace ife {

/// Base class for every error raised by the IFE engine and its tooling.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed input text. `line()` is 1-based; 0 when not line-oriented.
class ParseError : public Error {
 public:
  ParseError(const std::string& what, std::size_t line)
      : Error(line == 0 ? what : "line " + std::to_string(line) + ": " + what), line_(line) {}
  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

/// A configured size cap (node ids, edge counts, threads) was exceeded.
class CapacityError : public Error {
 public:
  using Error::Error;
};

/// A path length no longer fits the 1-byte length encoding.
class DepthOverflowError : public Error {
 public:
  using Error::Error;
};

/// A query-level memory budget was exhausted (parent arenas, lane arrays).
class OutOfMemoryError : public Error {
 public:
  using Error::Error;
};

/// Invalid query or workload configuration.
class InvalidArgument : public Error {
 public:
  using Error::Error;
};

}  // namespace ife
