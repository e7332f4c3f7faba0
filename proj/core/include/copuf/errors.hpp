#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace copuf {

// Failure categories. The CLI maps each one to a distinct exit code.
enum class ErrorKind {
  kConfig,      // invalid parameters, geometry, unknown identifiers
  kIo,          // unreadable/unwritable paths
  kFormat,      // dataset version mismatch, truncation, checksum failure
  kDivergence,  // non-finite training loss
};

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}
  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

class ConfigError : public Error {
 public:
  explicit ConfigError(const std::string& what) : Error(ErrorKind::kConfig, what) {}
};

class IoError : public Error {
 public:
  explicit IoError(const std::string& what) : Error(ErrorKind::kIo, what) {}
};

class FormatError : public Error {
 public:
  enum class Reason { kVersionMismatch, kTruncated, kChecksum };
  FormatError(Reason reason, const std::string& what)
      : Error(ErrorKind::kFormat, what), reason_(reason) {}
  Reason reason() const noexcept { return reason_; }

 private:
  Reason reason_;
};

class DivergenceError : public Error {
 public:
  DivergenceError(std::size_t epoch, const std::string& what)
      : Error(ErrorKind::kDivergence, what), epoch_(epoch) {}
  std::size_t epoch() const noexcept { return epoch_; }

 private:
  std::size_t epoch_;
};

}  // namespace copuf
