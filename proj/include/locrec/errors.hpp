#pragma once

#include <stdexcept>
#include <string>

namespace locrec {

/// Operands belong to different finite-field towers.
class TowerMismatch : public std::invalid_argument {
 public:
  TowerMismatch() : std::invalid_argument("operands belong to different field towers") {}
};

/// Operands belong to different extensions.
class ExtensionMismatch : public std::invalid_argument {
 public:
  ExtensionMismatch() : std::invalid_argument("operands belong to different extensions") {}
};

/// Series in different uniformizers were combined.
class SymbolMismatch : public std::invalid_argument {
 public:
  SymbolMismatch(const std::string& a, const std::string& b)
      : std::invalid_argument("uniformizer mismatch: '" + a + "' vs '" + b + "'") {}
};

class DivisionByZero : public std::domain_error {
 public:
  DivisionByZero() : std::domain_error("division by zero") {}
};

/// An element has no e-th root where one was required.
class NotAPower : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// The ramification index is divisible by the residue characteristic.
class WildRamification : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Parameters do not describe a supported tame abelian extension.
class InvalidExtension : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Malformed descriptor or element text.
class ParseError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A computed object failed an internal consistency audit.
class InvariantViolation : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

}  // namespace locrec
