#pragma once

#include <stdexcept>
#include <string>
#include <utility>

namespace lwtune {

// Base class for everything this library throws on bad input or bad state.
// `code()` is a short stable identifier ("domain", "unstable", ...) meant for
// machine-readable error reports; `what()` carries the human explanation.
class Error : public std::runtime_error {
 public:
  Error(std::string code, const std::string& message)
      : std::runtime_error(message), code_(std::move(code)) {}

  const std::string& code() const noexcept { return code_; }

 private:
  std::string code_;
};

// Argument outside the mathematical or configured domain of an operation.
class DomainError : public Error {
 public:
  explicit DomainError(const std::string& message) : Error("domain", message) {}
};

// Branch index other than 0 or -1 requested for the Lambert W function.
class InvalidBranchError : public Error {
 public:
  explicit InvalidBranchError(const std::string& message)
      : Error("invalid-branch", message) {}
};

// Simulated loop output diverged; the gains do not stabilize the plant.
class UnstableLoopError : public Error {
 public:
  explicit UnstableLoopError(const std::string& message)
      : Error("unstable", message) {}
};

// Requested overshoot cannot be produced by any gamma in the search range.
class UnreachableTargetError : public Error {
 public:
  explicit UnreachableTargetError(const std::string& message)
      : Error("unreachable-target", message) {}
};

// A metric that needs a steady-state value was asked of a response that
// never reached one.
class NotSettledError : public Error {
 public:
  explicit NotSettledError(const std::string& message)
      : Error("not-settled", message) {}
};

}  // namespace lwtune
