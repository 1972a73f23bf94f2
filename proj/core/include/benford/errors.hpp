#pragma once

#include <stdexcept>
#include <string>

namespace benford {

// Typed failures. Everything derives from Error so callers can catch the
// whole family when mapping to process exit codes.
struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// chains
struct NegativeEntry : Error { using Error::Error; };
struct RowSumViolation : Error { using Error::Error; };
struct DimensionTooSmall : Error { using Error::Error; };
struct NotIrreducible : Error { using Error::Error; };
struct NotAperiodic : Error { using Error::Error; };
struct NOverflow : Error { using Error::Error; };

// spectral
struct ConvergenceFailure : Error { using Error::Error; };
struct MultipleEigenvalue : Error { using Error::Error; };
struct UnsupportedDegree : Error { using Error::Error; };

// significand
struct ZeroInput : Error { using Error::Error; };
struct LeadingZero : Error { using Error::Error; };
struct EmptySample : Error { using Error::Error; };

// sequences
struct PrecisionBudgetExceeded : Error { using Error::Error; };

// resonance
struct DimensionTooLarge : Error { using Error::Error; };

// cli / detect
struct TooShort : Error { using Error::Error; };
struct UnknownStateLabel : Error { using Error::Error; };
struct ParseError : Error { using Error::Error; };

}  // namespace benford
