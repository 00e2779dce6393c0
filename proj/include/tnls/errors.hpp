#pragma once

#include <stdexcept>
#include <string>

namespace tnls {

// Error categories surfaced by the library. The CLI maps them to exit codes.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Argument outside the mathematical domain of an operation (p < 1, empty window, S > M, ...).
class DomainError : public Error {
 public:
  using Error::Error;
};

// Index outside the representable Nyquist range.
class RangeError : public Error {
 public:
  using Error::Error;
};

// Non-finite or otherwise corrupt field data.
class DataError : public Error {
 public:
  using Error::Error;
};

// Quadrature or iteration failed to reach the requested accuracy.
class NumericError : public Error {
 public:
  using Error::Error;
};

// Profile support does not fit the chart of the torus.
class GeometryError : public Error {
 public:
  using Error::Error;
};

// Invalid configuration: parse failure, unknown key or failed validation.
class ConfigError : public Error {
 public:
  ConfigError(const std::string& key, const std::string& message)
      : Error(key.empty() ? message : key + ": " + message), key_(key) {}
  const std::string& key() const noexcept { return key_; }

 private:
  std::string key_;
};

class IoError : public Error {
 public:
  IoError(const std::string& path, const std::string& message)
      : Error(path + ": " + message), path_(path) {}
  const std::string& path() const noexcept { return path_; }

 private:
  std::string path_;
};

}  // namespace tnls
