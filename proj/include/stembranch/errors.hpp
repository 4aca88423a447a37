#pragma once

#include <stdexcept>
#include <string>

namespace stembranch {

// Base of every error raised by the library. name() is the stable identifier
// printed by the CLI for numerical failures.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
  virtual const char* name() const noexcept = 0;
};

#define STEMBRANCH_DEFINE_ERROR(Type)                                   \
  class Type : public Error {                                           \
   public:                                                              \
    using Error::Error;                                                 \
    const char* name() const noexcept override { return #Type; }        \
  }

// Parameter values that violate a type invariant (user input problem).
STEMBRANCH_DEFINE_ERROR(InvalidParameterError);

// Numerical failures. Pgf Auto mode treats all of these as "fall back to the
// backward-equation oracle".
STEMBRANCH_DEFINE_ERROR(ConvergenceError);
STEMBRANCH_DEFINE_ERROR(DomainError);
STEMBRANCH_DEFINE_ERROR(DegenerateParameterError);
STEMBRANCH_DEFINE_ERROR(SingularTransformError);
STEMBRANCH_DEFINE_ERROR(StepUnderflowError);
STEMBRANCH_DEFINE_ERROR(ConsistencyError);

// No closed-form asymptotic result covers the requested regime.
STEMBRANCH_DEFINE_ERROR(UnsupportedRegimeError);

#undef STEMBRANCH_DEFINE_ERROR

}  // namespace stembranch
