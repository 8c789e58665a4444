#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace wanroute {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed input file. `offset()` is the byte position where parsing failed.
class ParseError : public Error {
 public:
  ParseError(const std::string& message, std::size_t offset)
      : Error(message + " (at byte offset " + std::to_string(offset) + ")"),
        offset_(offset) {}

  std::size_t offset() const noexcept { return offset_; }

 private:
  std::size_t offset_;
};

/// The destination cannot be reached from the source.
class NoPathError : public Error {
 public:
  using Error::Error;
};

/// A caller violated an operation's precondition.
class PreconditionError : public Error {
 public:
  using Error::Error;
};

/// Invalid scenario or traffic configuration.
class ConfigError : public Error {
 public:
  using Error::Error;
};

/// The exact oracle exceeded its time budget.
class OracleTimeout : public Error {
 public:
  using Error::Error;
};

}  // namespace wanroute
