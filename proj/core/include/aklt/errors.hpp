#pragma once

#include <stdexcept>
#include <string>

namespace aklt {

// Invalid argument value (out-of-range spin, odd K, a < 1, ...).
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

// Inputs that are individually valid but do not fit together
// (graph/sector size mismatch, vector length mismatch, unknown subsystem).
class StructuralError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Gap data required for a certificate is missing.
class IncompleteDataError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A sector exceeds the caller's dimension budget.
class BudgetRefusal : public std::runtime_error {
 public:
  BudgetRefusal(const std::string& what, std::size_t dim, std::size_t cap)
      : std::runtime_error(what), dimension(dim), max_dim(cap) {}
  std::size_t dimension;
  std::size_t max_dim;
};

}  // namespace aklt
