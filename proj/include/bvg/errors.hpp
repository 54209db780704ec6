#pragma once

#include <stdexcept>
#include <string>

namespace bvg {

/// Argument outside the domain of a function or a constructor's parameter range.
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Overflow, non-convergent quadrature or a non-finite intermediate.
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A constructor's hypothesis is violated (e.g. alpha + beta > 1, Wendland gate).
class ParameterGateError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Singular kriging system, failed factorization.
class DegenerateSystemError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed input file or JSON document.
class ParseError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace bvg
