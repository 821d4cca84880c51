#pragma once

#include <stdexcept>
#include <string>

namespace mgt {

// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Invalid parameter values or inputs outside a stated hypothesis.
class DomainError : public Error {
 public:
  using Error::Error;
};

// Correct types, wrong combination (zone mismatch, forbidden flags, ...).
class UsageError : public Error {
 public:
  using Error::Error;
};

// Requested operation lies outside what the library supports (e.g. s < 0).
class OutOfScopeError : public Error {
 public:
  using Error::Error;
};

class DegenerateConfigurationError : public Error {
 public:
  DegenerateConfigurationError(const std::string& what, double rho)
      : Error(what), rho_(rho) {}
  double rho() const { return rho_; }

 private:
  double rho_;
};

// Discretization too coarse for the requested accuracy.
class ResolutionError : public Error {
 public:
  ResolutionError(const std::string& what, double required)
      : Error(what), required_(required) {}
  double required() const { return required_; }

 private:
  double required_;
};

class IntegrationFailure : public Error {
 public:
  using Error::Error;
};

class FitError : public Error {
 public:
  using Error::Error;
};

}  // namespace mgt
