#pragma once

#include <stdexcept>
#include <string>

namespace actionalg {

/// Base class for all library errors.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// An element or word does not belong to the presentation it was used with.
class PresentationMismatch : public Error {
 public:
  using Error::Error;
};

/// An operation received an input it is not defined on (e.g. h = e).
class DegenerateInput : public Error {
 public:
  using Error::Error;
};

/// A configured enumeration or census cap was exceeded.
class BudgetExceeded : public Error {
 public:
  using Error::Error;
};

/// Mathematical precondition violated (e.g. element of infinite order where finite is required).
class DomainError : public Error {
 public:
  using Error::Error;
};

/// Text could not be parsed as a word, operator or config entry.
class ParseError : public Error {
 public:
  using Error::Error;
};

}  // namespace actionalg
