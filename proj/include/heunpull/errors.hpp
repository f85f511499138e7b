#pragma once

#include <stdexcept>
#include <string>

namespace heunpull {

/// Base of every error thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A precondition on the mathematical input was violated.
class DomainError : public Error {
 public:
  using Error::Error;
};

/// The value needs a larger scalar field than the one in use (e.g. omega over Q).
class FieldError : public Error {
 public:
  using Error::Error;
};

/// Parameters hit a degenerate set (vanishing Pochhammer, t in {0,1}, ...).
class DegenerateError : public DomainError {
 public:
  using DomainError::DomainError;
};

/// A rational function has a pole where a Taylor jet was requested.
class PoleError : public DomainError {
 public:
  PoleError(const std::string& what, int order) : DomainError(what), order_(order) {}
  int order() const { return order_; }

 private:
  int order_;
};

class ParseError : public Error {
 public:
  using Error::Error;
};

/// Two records cannot be composed: a parameter constraint of the interface fails.
class InterfaceError : public Error {
 public:
  InterfaceError(const std::string& what, std::string parameter) : Error(what), parameter_(std::move(parameter)) {}
  const std::string& parameter() const { return parameter_; }

 private:
  std::string parameter_;
};

/// Degree or field outside what the solver supports.
class UnsupportedError : public Error {
 public:
  using Error::Error;
};

}  // namespace heunpull
