#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace ebcc {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Non-finite or otherwise unusable input data.
class IngestError : public Error {
 public:
  IngestError(const std::string& what, std::size_t index)
      : Error(what + " (element " + std::to_string(index) + ")"), index_(index) {}
  std::size_t index() const noexcept { return index_; }

 private:
  std::size_t index_;
};

class ArgumentError : public Error {
 public:
  using Error::Error;
};

// Malformed stream or file; offset is the byte position where parsing failed.
class FormatError : public Error {
 public:
  FormatError(const std::string& what, std::size_t offset)
      : Error(what + " (offset " + std::to_string(offset) + ")"), offset_(offset) {}
  std::size_t offset() const noexcept { return offset_; }

 private:
  std::size_t offset_;
};

class UnsupportedVersion : public FormatError {
 public:
  UnsupportedVersion(unsigned version, std::size_t offset)
      : FormatError("unsupported container version " + std::to_string(version), offset),
        version_(version) {}
  unsigned version() const noexcept { return version_; }

 private:
  unsigned version_;
};

// The full residual stream still leaves points above the error bound.
class ResidualInsufficient : public Error {
 public:
  using Error::Error;
};

class SimulationError : public Error {
 public:
  SimulationError(const std::string& what, std::size_t step)
      : Error(what + " (step " + std::to_string(step) + ")"), step_(step) {}
  std::size_t step() const noexcept { return step_; }

 private:
  std::size_t step_;
};

class IoError : public Error {
 public:
  using Error::Error;
};

}  // namespace ebcc
