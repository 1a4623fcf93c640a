#pragma once

#include "heunstep/errors.hpp"
#include "heunstep/types.hpp"

namespace heunstep {

// Euler gamma function for complex argument.  Lanczos rational approximation
// on Re z >= 1/2, reflection formula elsewhere.  Relative accuracy better
// than 1e-12 for |z| <= 50.  Throws PoleError within 1e-12 of a non-positive
// integer.
ComplexValue gamma(ComplexValue zc);

// Reciprocal gamma, entire: returns exactly 0 at the poles of gamma.
ComplexValue reciprocal_gamma(ComplexValue zc);

// Gauss hypergeometric function 2F1(a, b; c; y) with complex parameters.
// Direct power series for |y| <= 1/2; otherwise evaluated through the
// fractional-linear transformations of the argument (y -> y/(y-1), 1-y, 1/y,
// 1/(1-y), 1-1/y), selecting the candidate that minimises the modulus of the
// transformed argument.  On the cut [1, inf) the result is the limit from the
// side recorded in the argument.  Throws ParameterDegeneracy when the lower
// parameter is within 1e-10 of a non-positive integer (unless the series is
// a polynomial that terminates before the pole); throws NonConvergence when
// no series meets tolerance within the term cap.
//
// Near-degenerate transformations: when c-a-b or a-b sits within 1e-8 of an
// integer, transformations requiring that gamma difference are skipped in
// favour of any clean alternative; if no clean alternative converges, the
// parameters are nudged by 1e-9*(1+i), bounding the induced relative error
// by roughly 1e-7 in the worst case (far below the 1e-8 tolerances of the
// consumers of these paths).
ComplexValue gauss_2f1(ComplexValue a, ComplexValue b, ComplexValue c,
                       BranchedArgument y);

// Clausen generalized hypergeometric function 3F2(a1, a2, a3; b1, b2; y) by
// direct power series.  Valid for |y| < 1 (a cross-check tool, not a general
// evaluator); throws NonConvergence outside the series domain and
// ParameterDegeneracy when a lower parameter is a non-positive integer.
ComplexValue clausen_3f2(ComplexValue a1, ComplexValue a2, ComplexValue a3,
                         ComplexValue b1, ComplexValue b2, BranchedArgument y);

namespace detail {

// The fractional-linear argument transformations available to gauss_2f1.
enum class FractionalLinearMap {
  direct,                // power series in y
  pfaff,                 // (1-y)^(-a) series in y/(y-1)
  one_minus,             // two-series combination in 1-y
  reciprocal,            // two-series combination in 1/y
  reciprocal_one_minus,  // two-series combination in 1/(1-y)
  one_minus_reciprocal,  // two-series combination in 1-1/y
};

// Evaluate 2F1 forcing a particular transformation route (test hook used by
// the transformation-consistency suite; production code goes through
// gauss_2f1's automatic selection).
ComplexValue gauss_2f1_via(FractionalLinearMap map, ComplexValue a,
                           ComplexValue b, ComplexValue c, BranchedArgument y);

// True when z lies within tol of an integer (any sign).
bool near_integer(ComplexValue z, double tol);

// True when z lies within tol of a non-positive integer.
bool near_nonpositive_integer(ComplexValue z, double tol);

}  // namespace detail

}  // namespace heunstep
