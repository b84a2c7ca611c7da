#pragma once

#include <stdexcept>
#include <string>

namespace bvarx {

/// Failure category. The numeric values double as CLI exit codes.
enum class ErrorKind : int {
  Config = 2,
  Data = 3,
  Numerical = 4,
};

/// Base for every error raised by the library. Carries the module that
/// raised it so callers can render `{code, module, message}` records.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, std::string module, const std::string& message);

  ErrorKind kind() const noexcept { return kind_; }
  const std::string& module() const noexcept { return module_; }
  int exit_code() const noexcept { return static_cast<int>(kind_); }
  /// Short machine-readable label: "config", "data" or "numerical".
  std::string code() const;

 private:
  ErrorKind kind_;
  std::string module_;
};

class ConfigError : public Error {
 public:
  ConfigError(std::string module, const std::string& message)
      : Error(ErrorKind::Config, std::move(module), message) {}
};

/// Distinct reasons a panel can be rejected at ingestion.
enum class DataFault {
  MissingFile,
  MissingColumn,
  DuplicateColumn,
  BadDate,
  DuplicateDate,
  MonthlyGap,
  MissingValue,
  NonPositiveLog,
  BadShape,
  DegenerateScale,
  Other,
};

class DataError : public Error {
 public:
  DataError(DataFault fault, std::string module, const std::string& message)
      : Error(ErrorKind::Data, std::move(module), message), fault_(fault) {}
  DataFault fault() const noexcept { return fault_; }

 private:
  DataFault fault_;
};

class NumericalError : public Error {
 public:
  NumericalError(std::string module, const std::string& message)
      : Error(ErrorKind::Numerical, std::move(module), message) {}
};

}  // namespace bvarx
