#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

#include <json.hpp>

namespace ssb {

enum class ErrorKind {
  validation,
  precondition,
  domain,
  non_convergence,
  capability,
};

std::string_view to_string(ErrorKind kind);

/// Process exit code for a failure of the given kind: 1 for input and
/// precondition problems, 2 for numerical non-convergence and unsupported
/// capability requests.
int exit_code(ErrorKind kind);

/// Base of every error thrown by the library. `details` carries structured
/// diagnostics (offending indices, best iterates, truncation data).
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message, nlohmann::json details = nlohmann::json::object())
      : std::runtime_error(message), kind_(kind), details_(std::move(details)) {}

  ErrorKind kind() const noexcept { return kind_; }
  const nlohmann::json& details() const noexcept { return details_; }

  nlohmann::json to_json() const;

 private:
  ErrorKind kind_;
  nlohmann::json details_;
};

struct ValidationError : Error {
  explicit ValidationError(const std::string& m, nlohmann::json d = nlohmann::json::object())
      : Error(ErrorKind::validation, m, std::move(d)) {}
};

struct PreconditionError : Error {
  explicit PreconditionError(const std::string& m, nlohmann::json d = nlohmann::json::object())
      : Error(ErrorKind::precondition, m, std::move(d)) {}
};

struct DomainError : Error {
  explicit DomainError(const std::string& m, nlohmann::json d = nlohmann::json::object())
      : Error(ErrorKind::domain, m, std::move(d)) {}
};

struct NonConvergenceError : Error {
  explicit NonConvergenceError(const std::string& m, nlohmann::json d = nlohmann::json::object())
      : Error(ErrorKind::non_convergence, m, std::move(d)) {}
};

struct CapabilityError : Error {
  explicit CapabilityError(const std::string& m, nlohmann::json d = nlohmann::json::object())
      : Error(ErrorKind::capability, m, std::move(d)) {}
};

}  // namespace ssb
