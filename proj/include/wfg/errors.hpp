#pragma once

#include <stdexcept>
#include <string>

namespace wfg {

// Base class for all library errors.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

#define WFG_DEFINE_ERROR(name)            \
  class name : public Error {             \
   public:                                \
    using Error::Error;                   \
  }

// Input validation.
WFG_DEFINE_ERROR(DimensionMismatch);
WFG_DEFINE_ERROR(NonPositiveValue);
WFG_DEFINE_ERROR(CrosstalkOutOfRange);
WFG_DEFINE_ERROR(InvalidBudget);

// Single-user solver.
WFG_DEFINE_ERROR(ToleranceNotReached);

// Equilibrium algebra.
WFG_DEFINE_ERROR(UnsortedMultipliers);
WFG_DEFINE_ERROR(UnsortedThresholds);
WFG_DEFINE_ERROR(NonPositiveReciprocal);
WFG_DEFINE_ERROR(IndexOutOfRange);
WFG_DEFINE_ERROR(NegativePower);
WFG_DEFINE_ERROR(WrongUserCount);
WFG_DEFINE_ERROR(NonStrictBudgets);

// Verification.
WFG_DEFINE_ERROR(InfeasibleProfile);
WFG_DEFINE_ERROR(CrosstalkNotOne);
WFG_DEFINE_ERROR(InfeasibleSplit);

#undef WFG_DEFINE_ERROR

}  // namespace wfg
