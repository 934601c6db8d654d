#pragma once

#include <stdexcept>
#include <string>

namespace lognl {

enum class ErrorKind {
  Argument,     // malformed input or violated precondition
  Domain,       // argument outside the mathematical domain of a function
  Contract,     // zero-exterior or similar structural contract broken
  Resolution,   // grid too coarse to produce any node
  KernelDefect, // kernel returned NaN or a negative value
  Unsupported,  // dimension or configuration outside the shipped set
  Diagnostic,   // a numerical diagnostic could not be formed
  Fit,          // too few points survive for a regression
  Numerical,    // NaN propagation, singular factorization, etc.
};

const char* to_string(ErrorKind kind) noexcept;

/// All library failures are reported through this type. `module()` names the
/// subsystem that raised it so the CLI can produce tagged messages.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, std::string module, const std::string& what)
      : std::runtime_error(what), kind_(kind), module_(std::move(module)) {}

  ErrorKind kind() const noexcept { return kind_; }
  const std::string& module() const noexcept { return module_; }

 private:
  ErrorKind kind_;
  std::string module_;
};

}  // namespace lognl
