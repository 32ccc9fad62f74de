#pragma once

#include <stdexcept>
#include <string>
#include <utility>

namespace lqo {

// Failure categories. The CLI maps these onto exit codes.
enum class ErrorKind {
  usage,       // bad flags or arguments
  validation,  // malformed or inconsistent input data
  numerical,   // singular solve, loss of stability, spectral overlap
};

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message, std::string context = {})
      : std::runtime_error(message), kind_(kind), context_(std::move(context)) {}

  ErrorKind kind() const noexcept { return kind_; }
  const std::string& context() const noexcept { return context_; }

 private:
  ErrorKind kind_;
  std::string context_;
};

class UsageError : public Error {
 public:
  explicit UsageError(const std::string& message, std::string context = {})
      : Error(ErrorKind::usage, message, std::move(context)) {}
};

class ValidationError : public Error {
 public:
  explicit ValidationError(const std::string& message, std::string context = {})
      : Error(ErrorKind::validation, message, std::move(context)) {}
};

class NumericalError : public Error {
 public:
  explicit NumericalError(const std::string& message, std::string context = {})
      : Error(ErrorKind::numerical, message, std::move(context)) {}
};

}  // namespace lqo
