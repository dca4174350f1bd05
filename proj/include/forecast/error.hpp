#pragma once

#include <stdexcept>
#include <string>

namespace forecast {

// Failure classes map one-to-one onto CLI exit codes.
enum class ErrorKind {
  Usage = 1,
  Data = 2,
  Numeric = 3,
};

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, std::string code, const std::string& what)
      : std::runtime_error(what), kind_(kind), code_(std::move(code)) {}

  ErrorKind kind() const noexcept { return kind_; }
  // Short upper-case token, stable across releases (e.g. "SCHEMA").
  const std::string& code() const noexcept { return code_; }

 private:
  ErrorKind kind_;
  std::string code_;
};

struct DimensionError : Error {
  explicit DimensionError(const std::string& what)
      : Error(ErrorKind::Numeric, "DIMENSION", what) {}
};

struct RangeError : Error {
  explicit RangeError(const std::string& what)
      : Error(ErrorKind::Usage, "RANGE", what) {}
};

struct ConfigError : Error {
  explicit ConfigError(const std::string& what)
      : Error(ErrorKind::Usage, "CONFIG", what) {}
};

struct DataError : Error {
  explicit DataError(const std::string& what)
      : Error(ErrorKind::Data, "DATA", what) {}
};

struct SchemaError : Error {
  explicit SchemaError(const std::string& what)
      : Error(ErrorKind::Data, "SCHEMA", what) {}
};

struct NumericError : Error {
  explicit NumericError(const std::string& what)
      : Error(ErrorKind::Numeric, "NUMERIC", what) {}
};

}  // namespace forecast
