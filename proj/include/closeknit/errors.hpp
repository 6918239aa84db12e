#pragma once

#include <stdexcept>
#include <string>

namespace closeknit {

/// Coarse classification used by the CLI exit-code contract.
enum class ErrorCategory {
  Input,       // malformed or inconsistent input (exit 4)
  Validation,  // a close-knit condition is violated (exit 2)
  Cap,         // an enumeration or closure bound was hit (exit 3)
  Internal,    // a library invariant failed (exit 1)
};

class Error : public std::runtime_error {
 public:
  Error(ErrorCategory category, const std::string& what)
      : std::runtime_error(what), category_(category) {}
  [[nodiscard]] ErrorCategory category() const noexcept { return category_; }

 private:
  ErrorCategory category_;
};

/// Shape mismatch between values that must share length/kind/carrier.
class StructuralError : public Error {
 public:
  explicit StructuralError(const std::string& what) : Error(ErrorCategory::Input, what) {}
};

/// A documented precondition of an operation does not hold.
class ContractViolation : public Error {
 public:
  explicit ContractViolation(const std::string& what) : Error(ErrorCategory::Input, what) {}
};

class MalformedInput : public Error {
 public:
  explicit MalformedInput(const std::string& what) : Error(ErrorCategory::Input, what) {}
};

/// A proposed automorphism is not one (singular matrix, non-normalizing permutation, ...).
class InvalidAction : public Error {
 public:
  explicit InvalidAction(const std::string& what) : Error(ErrorCategory::Input, what) {}
};

class CapExceeded : public Error {
 public:
  explicit CapExceeded(const std::string& what) : Error(ErrorCategory::Cap, what) {}
};

class OrbitCapExceeded : public CapExceeded {
 public:
  using CapExceeded::CapExceeded;
};

class StrongSearchExhausted : public CapExceeded {
 public:
  using CapExceeded::CapExceeded;
};

class ElementCapExceeded : public CapExceeded {
 public:
  using CapExceeded::CapExceeded;
};

class EnumerationCapExceeded : public CapExceeded {
 public:
  using CapExceeded::CapExceeded;
};

class ConditionViolation : public Error {
 public:
  explicit ConditionViolation(const std::string& what) : Error(ErrorCategory::Validation, what) {}
};

class AssociativityViolation : public ConditionViolation {
 public:
  using ConditionViolation::ConditionViolation;
};

class MonotonicityViolation : public ConditionViolation {
 public:
  using ConditionViolation::ConditionViolation;
};

class IncrementViolation : public ConditionViolation {
 public:
  using ConditionViolation::ConditionViolation;
};

class EquivarianceViolation : public ConditionViolation {
 public:
  using ConditionViolation::ConditionViolation;
};

class InternalInvariantViolation : public Error {
 public:
  explicit InternalInvariantViolation(const std::string& what)
      : Error(ErrorCategory::Internal, what) {}
};

}  // namespace closeknit
