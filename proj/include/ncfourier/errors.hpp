#pragma once

#include <stdexcept>
#include <string>

namespace ncf {

/// Operands live in different algebras, or block shapes do not line up.
class StructuralError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A documented precondition on the inputs was not met.
class ContractViolation : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Zero operator where a ratio needs a nonzero one.
class DegenerateInput : public ContractViolation {
 public:
  using ContractViolation::ContractViolation;
};

/// Eigensolver failed to converge, or a spectrum was negative past tolerance.
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Text input (config, group file, operator file) is malformed.
class ParseError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace ncf
