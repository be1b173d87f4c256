#pragma once

#include <stdexcept>
#include <string>

namespace qsearch {

// Precondition violations are reported as std::invalid_argument.
// Everything below signals a numerical condition under which a requested
// quantity does not exist or could not be computed.
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// The two-level oscillation frequency vanishes; no proper time exists.
class DegenerateFrequency : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

// The denominator of the beta window formula vanishes.
class DegenerateDenominator : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

class DimensionTooLarge : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

class EigensolverFailure : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

// The sampled maximum sits on the right edge of the scan window.
class WindowTooNarrow : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

}  // namespace qsearch
