#pragma once

#include <stdexcept>
#include <string>

namespace heunstep {

// Base class for every numeric-domain failure raised by the library.  The CLI
// maps these to exit code 2 (numeric/regime error), as opposed to usage errors
// (exit 1) and verification failures (exit 3).
class NumericError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Invalid physical configuration (non-positive mass, zero steepness, ...).
class ConfigError : public NumericError {
 public:
  using NumericError::NumericError;
};

// Gamma function evaluated at (or within tolerance of) a non-positive integer.
class PoleError : public NumericError {
 public:
  using NumericError::NumericError;
};

// A hypergeometric parameter combination that makes the requested evaluation
// path singular (lower parameter a non-positive integer, or a transformation
// whose gamma factors degenerate and no alternative path exists).
class ParameterDegeneracy : public NumericError {
 public:
  using NumericError::NumericError;
};

// A series failed to reach the stopping tolerance within the term cap, or the
// argument lies outside the series' domain of convergence.
class NonConvergence : public NumericError {
 public:
  using NumericError::NumericError;
};

// The exponent parameter of the expansion family is too close to an integer,
// so the shifted lower parameters of the expansion functions hit a pole.
class DegenerateGamma : public NumericError {
 public:
  using NumericError::NumericError;
};

// A closed-form coefficient denominator vanishes, signalling a parameter set
// for which the chosen fundamental-solution form is invalid.
class DegenerateCoefficient : public NumericError {
 public:
  using NumericError::NumericError;
};

// The requested operation is outside its physical regime of validity
// (for example asking for analytic scattering quantities below the barrier).
class RegimeError : public NumericError {
 public:
  using NumericError::NumericError;
};

// An intermediate quantity would leave the double-precision exponent range.
class OverflowGuard : public NumericError {
 public:
  using NumericError::NumericError;
};

// Step-halving changed the extracted observable by more than the contract
// allows: the integration step is too coarse for the requested accuracy.
class StepTooLarge : public NumericError {
 public:
  using NumericError::NumericError;
};

// The plane-wave decomposition at the left end of the integration domain is
// not stable between neighbouring samples (the domain end is not flat enough).
class DecompositionUnstable : public NumericError {
 public:
  using NumericError::NumericError;
};

}  // namespace heunstep
