#pragma once

#include <stdexcept>
#include <string>

namespace gradquad {

/// Base class for all library errors.
class Error : public std::runtime_error {
public:
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

/// Invalid run configuration (schema violation, bad parameter). CLI exit 64.
class ConfigError : public Error {
public:
  using Error::Error;
};

/// Evaluation outside a function's valid range (transform branch, etc.).
class DomainError : public Error {
public:
  using Error::Error;
};

/// Floating-point range exhausted (exponent too large).
class RangeError : public Error {
public:
  using Error::Error;
};

/// Field and grid sizes disagree.
class GridMismatchError : public Error {
public:
  using Error::Error;
};

/// Tridiagonal factorization hit an exactly zero pivot.
class SingularMatrixError : public Error {
public:
  using Error::Error;
};

/// An iteration stagnated without meeting its tolerance.
class ConvergenceError : public Error {
public:
  using Error::Error;
};

/// A computed quantity violated a required sign structure.
class PositivityError : public Error {
public:
  using Error::Error;
};

/// Operation called outside its coefficient/nonlinearity regime.
class RegimeError : public Error {
public:
  using Error::Error;
};

} // namespace gradquad
