#pragma once

#include <stdexcept>
#include <string>

namespace dhk {

/// Base for every error caused by bad input (CLI exit code 2).
class InputError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class ParseError : public InputError {
 public:
  using InputError::InputError;
};

class DimensionError : public InputError {
 public:
  using InputError::InputError;
};

/// A polyhedral set that needs to be nonempty was empty.
class InfeasibleError : public InputError {
 public:
  using InputError::InputError;
};

/// Some linear form vanishes at the evaluation point (a pole of a Laplace transform).
class NonRegularError : public InputError {
 public:
  using InputError::InputError;
};

/// Cone fails to be proper / full-dimensional where that is required.
class GeometryError : public InputError {
 public:
  using InputError::InputError;
};

class InvalidModelError : public InputError {
 public:
  using InputError::InputError;
};

/// Numerical routine gave up (depth or enumeration limits).
class LimitError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace dhk
