#pragma once

#include <stdexcept>
#include <string>

namespace heatasym {

/// Malformed profile or run configuration document.
class ParseError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Input that parses but violates a model invariant (bad tails, empty grid, ...).
class ValidationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Quadrature budget exhausted, non-finite integrand, ill-conditioned fit.
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace heatasym
