#pragma once

#include <stdexcept>
#include <string>

namespace paultrap {

// Base of every exception thrown by the library.
class error : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

// Physically meaningless input (non-positive mass, bad duty cycle, ...).
class domain_error : public error {
  public:
    using error::error;
};

// A closed form has a vanishing denominator or sits on a resonance boundary.
class degenerate_error : public error {
  public:
    using error::error;
};

// A search exhausted its range without a root or admissible configuration.
class not_found_error : public error {
  public:
    using error::error;
};

// Caller violated a documented precondition (e.g. unstable branch requested
// where only stable solutions make sense).
class contract_error : public error {
  public:
    using error::error;
};

// Iterative numerics failed to converge.
class numerical_error : public error {
  public:
    using error::error;
};

}  // namespace paultrap
