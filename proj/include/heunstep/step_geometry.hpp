#pragma once

#include "heunstep/errors.hpp"

namespace heunstep {

// Parameters of the smooth asymmetric step potential V(x) = V0 + V1/z(x),
// where z(x) > 1 is the real root of (z+2)^2 (z-1) = 4 exp((x-x0)/sigma).
// v0: energy origin, v1: step height, sigma: steepness (sign sets the step
// direction), x0: position offset, mass and hbar: particle constants.
struct PhysicalConfig {
  double v0 = 0.0;
  double v1 = 1.0;
  double sigma = -1.0;
  double x0 = 0.0;
  double mass = 1.0;
  double hbar = 1.0;
};

// Throws ConfigError unless mass > 0, hbar > 0, sigma != 0 and all fields are
// finite.
void validate_config(const PhysicalConfig& cfg);

// One point of the coordinate transform: z(x) and its derivative rho = dz/dx.
struct TransformPoint {
  double x = 0.0;
  double z = 1.0;
  double rho = 0.0;
};

// The unique real root z > 1 of (z+2)^2 (z-1) = 4 exp((x-x0)/sigma),
// evaluated by the closed form for moderate exponents and by the asymptotic
// tails when exp((x-x0)/sigma) would overflow or underflow.
double coordinate_z(double x, const PhysicalConfig& cfg);

// Independent evaluation path: safeguarded bisection/Newton directly on the
// cubic.  Used to cross-check the closed form; valid while 4 exp((x-x0)/sigma)
// stays inside the double exponent range.
double coordinate_z_cubic(double x, const PhysicalConfig& cfg);

// rho = dz/dx = (z+2)(z-1) / (3 sigma z) for z > 1.
double jacobian_rho(double z, const PhysicalConfig& cfg);

// V(x) = V0 + V1 / z(x).
double potential_v(double x, const PhysicalConfig& cfg);

// z and rho evaluated together, with rho computed from the loss-free internal
// parts (accurate even where z-1 underflows the spacing of doubles near 1).
TransformPoint transform_point(double x, const PhysicalConfig& cfg);

namespace detail {

// The transform evaluated so that both tails keep full relative precision:
// zm1 = z-1 and zp2 = z+2 are computed without cancellation.  The phase of
// the wavefunction pre-factor depends on log(z-1), which would lose all
// accuracy beyond |x-x0| of about 36|sigma| if z-1 were formed by
// subtraction.
struct ZParts {
  double z;
  double zm1;  // z - 1, full relative precision
  double zp2;  // z + 2
};

ZParts coordinate_parts(double x, const PhysicalConfig& cfg);

}  // namespace detail

}  // namespace heunstep
