#pragma once

#include <stdexcept>
#include <string>

namespace blockfade {

// Argument outside the mathematical domain of an operation (x <= 0, tau >= T, ...).
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

// Argument inside the domain but outside the range an operation supports.
class RangeError : public std::range_error {
 public:
  using std::range_error::range_error;
};

// Root search could not bracket a solution inside its search interval.
class SaturationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Should not happen for valid inputs; carries diagnostics.
class InternalError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

}  // namespace blockfade
