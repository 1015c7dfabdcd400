#pragma once

#include <stdexcept>
#include <string>

namespace gcx {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Evaluation outside a nonvanishing region: division by zero, log(0), a sample
/// outside a declared map domain.
class DomainError : public Error {
 public:
  using Error::Error;
};

class ChartMismatch : public Error {
 public:
  using Error::Error;
};

/// Degree or shape precondition violated (odd exp_form argument, non-3-form H, ...).
class DegreeError : public Error {
 public:
  using Error::Error;
};

/// Rejection sampling could not produce enough admissible points.
class SamplingError : public Error {
 public:
  using Error::Error;
};

}  // namespace gcx
