#pragma once

#include <stdexcept>
#include <string>

namespace backbone {

// Base for every error the library reports. `code` is a stable
// machine-readable tag, `context` an optional free-form locator.
class Error : public std::runtime_error {
 public:
  Error(std::string code, const std::string& message, std::string context = {})
      : std::runtime_error(message), code_(std::move(code)), context_(std::move(context)) {}

  const std::string& code() const noexcept { return code_; }
  const std::string& context() const noexcept { return context_; }

 private:
  std::string code_;
  std::string context_;
};

// Malformed or invariant-violating input.
class ValidationError : public Error {
 public:
  using Error::Error;
};

// No labeling satisfies the constraints (budget, minimum distance).
class InfeasibleError : public Error {
 public:
  explicit InfeasibleError(const std::string& message, std::string context = {})
      : Error("infeasible", message, std::move(context)) {}
};

// Input exceeds a hard size guard (oracles, exact solvers).
class GuardError : public Error {
 public:
  explicit GuardError(const std::string& message, std::string context = {})
      : Error("guard_exceeded", message, std::move(context)) {}
};

// Two backbones share a position, or a backbone runs through a foreign point.
class OverlapError : public Error {
 public:
  explicit OverlapError(const std::string& message, std::string context = {})
      : Error("overlap", message, std::move(context)) {}
};

}  // namespace backbone
