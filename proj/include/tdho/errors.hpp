#pragma once

#include <stdexcept>
#include <string>

namespace tdho {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Precondition violated by the caller (bad parameters, malformed input).
class ContractError : public Error {
 public:
  using Error::Error;
};

// Time or argument outside the open interval where the model is defined.
class DomainError : public Error {
 public:
  using Error::Error;
};

// Algorithm did not reach the requested accuracy or produced non-finite output.
class NumericError : public Error {
 public:
  using Error::Error;
};

// Integration could not continue; last_time is the last point reached.
class SingularityError : public Error {
 public:
  SingularityError(const std::string& what, double last_time)
      : Error(what), last_time_(last_time) {}
  double last_time() const noexcept { return last_time_; }

 private:
  double last_time_;
};

// A regular-kernel quantity was requested at a caustic (s = 0).
class CausticError : public Error {
 public:
  using Error::Error;
};

}  // namespace tdho
