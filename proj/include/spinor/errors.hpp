#pragma once

#include <stdexcept>
#include <string>

namespace spinor {

/// Raised when a requested state or kernel would exceed the configured
/// amplitude/space caps. The CLI maps this to exit code 3.
class CapacityError : public std::runtime_error {
 public:
  explicit CapacityError(const std::string& what) : std::runtime_error(what) {}
};

/// Raised when an approximation is evaluated outside its domain of validity.
class DomainOfValidityError : public std::domain_error {
 public:
  explicit DomainOfValidityError(const std::string& what) : std::domain_error(what) {}
};

}  // namespace spinor
