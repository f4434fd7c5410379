#pragma once

#include <stdexcept>
#include <string>

namespace reserve {

class ReserveError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Raster side length out of range.
class InvalidDimensionError : public ReserveError {
 public:
  using ReserveError::ReserveError;
};

// Vector lengths disagree with the landscape they are applied to.
class DimensionError : public ReserveError {
 public:
  using ReserveError::ReserveError;
};

class InvalidArgumentError : public ReserveError {
 public:
  using ReserveError::ReserveError;
};

class ConfigError : public ReserveError {
 public:
  ConfigError(const std::string& source, int line, const std::string& what)
      : ReserveError(source + ":" + std::to_string(line) + ": " + what), line_(line) {}
  int line() const { return line_; }

 private:
  int line_;
};

class IoError : public ReserveError {
 public:
  using ReserveError::ReserveError;
};

// Raised when the black-box evaluation fails; carries the offending selection
// rendered as a 0/1 string.
class OracleError : public ReserveError {
 public:
  OracleError(std::string selection_bits, const std::string& cause)
      : ReserveError("oracle failed on selection " + selection_bits + ": " + cause),
        selection_bits_(std::move(selection_bits)) {}
  const std::string& selection_bits() const { return selection_bits_; }

 private:
  std::string selection_bits_;
};

}  // namespace reserve
